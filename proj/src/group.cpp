#include "fillinglab/group.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace fillinglab {

namespace {

const char* kDefaultAlphabet = "xyzuvwstpqrabcdefghijklmno";

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

std::size_t GroupElement::hash() const {
  std::size_t h = syllables_.size();
  for (const auto& s : syllables_) {
    h = mix(h, static_cast<std::size_t>(s.factor));
    for (auto x : s.value) h = mix(h, static_cast<std::size_t>(x));
  }
  return h;
}

GroupContext::GroupContext(std::vector<AbelianFactor> factors, std::vector<int> peripheral,
                           std::vector<std::vector<std::string>> generator_names)
    : factors_(std::move(factors)), peripheral_(std::move(peripheral)), names_(std::move(generator_names)) {
  if (peripheral_.empty()) throw std::invalid_argument("peripheral index list must be nonempty");
  auto sorted = peripheral_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("peripheral indices must be pairwise distinct");
  }
  for (int p : peripheral_) {
    if (p < 0 || p >= static_cast<int>(factors_.size())) {
      throw std::invalid_argument("peripheral index out of range");
    }
  }
  if (names_.empty()) {
    std::size_t next = 0;
    const std::string alphabet = kDefaultAlphabet;
    for (const auto& f : factors_) {
      std::vector<std::string> fn;
      for (int j = 0; j < f.num_generators(); ++j) {
        fn.push_back(next < alphabet.size() ? std::string(1, alphabet[next]) : "g" + std::to_string(next));
        ++next;
      }
      names_.push_back(std::move(fn));
    }
  }
  if (names_.size() != factors_.size()) throw std::invalid_argument("generator names do not match factors");
  std::vector<std::string> all;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (static_cast<int>(names_[i].size()) != factors_[i].num_generators()) {
      throw std::invalid_argument("generator names do not match factor rank");
    }
    all.insert(all.end(), names_[i].begin(), names_[i].end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("generator names must be distinct");
  }
  build_generating_set();
}

void GroupContext::build_generating_set() {
  gens_.clear();
  for (int f = 0; f < static_cast<int>(factors_.size()); ++f) {
    const auto& fac = factors_[f];
    std::vector<IntVec> seen;
    for (int j = 0; j < fac.num_generators(); ++j) {
      for (int sign : {1, -1}) {
        IntVec g = fac.generator(j, sign);
        if (fac.is_zero(g) || std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
        seen.push_back(g);
        gens_.push_back({f, std::move(g)});
      }
    }
  }
}

bool GroupContext::is_peripheral(int i) const {
  return std::find(peripheral_.begin(), peripheral_.end(), i) != peripheral_.end();
}

GroupElement GroupContext::multiply_syllable(const GroupElement& a, int factor, const IntVec& value) const {
  const auto& fac = factors_.at(factor);
  if (fac.is_zero(value)) return a;
  auto syl = a.syllables();
  if (!syl.empty() && syl.back().factor == factor) {
    IntVec merged = fac.add(syl.back().value, value);
    if (fac.is_zero(merged)) {
      syl.pop_back();
    } else {
      syl.back().value = std::move(merged);
    }
  } else {
    syl.push_back({factor, value});
  }
  return GroupElement(std::move(syl));
}

GroupElement GroupContext::from_syllable(int factor, const IntVec& value) const {
  return multiply_syllable(GroupElement{}, factor, value);
}

GroupElement GroupContext::multiply(const GroupElement& a, const GroupElement& b) const {
  std::vector<Syllable> out = a.syllables();
  for (const auto& s : b.syllables()) {
    if (!out.empty() && out.back().factor == s.factor) {
      const auto& fac = factors_[s.factor];
      IntVec merged = fac.add(out.back().value, s.value);
      if (fac.is_zero(merged)) {
        out.pop_back();
      } else {
        out.back().value = std::move(merged);
      }
    } else {
      out.push_back(s);
    }
  }
  return GroupElement(std::move(out));
}

GroupElement GroupContext::inverse(const GroupElement& a) const {
  std::vector<Syllable> out;
  out.reserve(a.syllable_length());
  for (auto it = a.syllables().rbegin(); it != a.syllables().rend(); ++it) {
    out.push_back({it->factor, factors_[it->factor].negate(it->value)});
  }
  return GroupElement(std::move(out));
}

GroupElement GroupContext::normal_form(const std::vector<std::pair<std::string, std::int64_t>>& word) const {
  GroupElement g;
  for (const auto& [sym, power] : word) {
    bool found = false;
    for (int f = 0; f < static_cast<int>(names_.size()) && !found; ++f) {
      for (int j = 0; j < static_cast<int>(names_[f].size()); ++j) {
        if (names_[f][j] != sym) continue;
        IntVec raw(factors_[f].num_generators(), 0);
        raw[j] = power;
        g = multiply_syllable(g, f, factors_[f].reduce(raw));
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("unknown generator symbol '" + sym + "'");
  }
  return g;
}

GroupElement GroupContext::parse_word(const std::string& word) const {
  std::vector<std::pair<std::string, std::int64_t>> tokens;
  std::istringstream in(word);
  std::string tok;
  while (in >> tok) {
    if (tok == "1" || tok == "e") continue;
    auto caret = tok.find('^');
    std::string sym = tok.substr(0, caret);
    std::int64_t power = 1;
    if (caret != std::string::npos) {
      try {
        std::size_t used = 0;
        power = std::stoll(tok.substr(caret + 1), &used);
        if (used != tok.size() - caret - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in '" + tok + "'");
      }
    }
    tokens.emplace_back(sym, power);
  }
  return normal_form(tokens);
}

std::string GroupContext::format(const GroupElement& g) const {
  if (g.is_identity()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& s : g.syllables()) {
    IntVec raw = factors_[s.factor].lift(s.value);
    for (std::size_t j = 0; j < raw.size(); ++j) {
      if (raw[j] == 0) continue;
      if (!first) os << ' ';
      os << names_[s.factor][j];
      if (raw[j] != 1) os << '^' << raw[j];
      first = false;
    }
  }
  return os.str();
}

GroupElement GroupContext::peripheral_coset_id(const GroupElement& g, int i) const {
  if (!g.is_identity() && g.syllables().back().factor == i) {
    auto syl = g.syllables();
    syl.pop_back();
    return GroupElement(std::move(syl));
  }
  return g;
}

IntVec GroupContext::peripheral_part(const GroupElement& g, int i) const {
  if (!g.is_identity() && g.syllables().back().factor == i) return g.syllables().back().value;
  return factors_.at(i).zero();
}

std::int64_t GroupContext::word_length(const GroupElement& g) const {
  std::int64_t s = 0;
  for (const auto& syl : g.syllables()) s += factors_[syl.factor].word_length(syl.value);
  return s;
}

std::string GroupContext::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " * ";
    os << factors_[i].describe();
  }
  os << " rel {";
  for (std::size_t i = 0; i < peripheral_.size(); ++i) os << (i ? "," : "") << peripheral_[i];
  os << "}";
  return os.str();
}

std::string to_string(QuotientKind k) {
  switch (k) {
    case QuotientKind::Infinite: return "infinite";
    case QuotientKind::VirtuallyCyclic: return "virtually-cyclic";
    case QuotientKind::Finite: return "finite";
  }
  return "?";
}

const std::vector<IntVec>* FillingSpec::kernel(int i) const {
  for (const auto& [idx, vecs] : kernels)
    if (idx == i) return &vecs;
  return nullptr;
}

bool FillingSpec::empty() const {
  return std::all_of(kernels.begin(), kernels.end(), [](const auto& k) { return k.second.empty(); });
}

GroupContext quotient_context(const GroupContext& ctx, const FillingSpec& spec) {
  std::vector<AbelianFactor> factors = ctx.factors();
  for (const auto& [idx, vecs] : spec.kernels) {
    if (!ctx.is_peripheral(idx)) throw std::invalid_argument("filling kernel on a non-peripheral factor");
    factors[idx] = ctx.factor(idx).quotient(vecs);
  }
  return GroupContext(std::move(factors), ctx.peripheral(), ctx.generator_names());
}

Filling::Filling(GroupContext base, FillingSpec spec)
    : base_(std::move(base)), quotient_(quotient_context(base_, spec)), spec_(std::move(spec)) {}

IntVec Filling::project_factor(int factor, const IntVec& value) const {
  return quotient_.factor(factor).reduce(base_.factor(factor).lift(value));
}

GroupElement Filling::project(const GroupElement& g) const {
  GroupElement out;
  for (const auto& s : g.syllables()) out = quotient_.multiply_syllable(out, s.factor, project_factor(s.factor, s.value));
  return out;
}

bool Filling::kernel_contains(const GroupElement& g) const { return project(g).is_identity(); }

QuotientKind Filling::kind(int peripheral_index) const {
  const auto& f = quotient_.factor(peripheral_index);
  if (f.is_finite()) return QuotientKind::Finite;
  if (f.free_rank() == 1) return QuotientKind::VirtuallyCyclic;
  return QuotientKind::Infinite;
}

IntVec Filling::reduce_mod_kernel(int factor, const IntVec& value) const {
  const auto& q = quotient_.factor(factor);
  return base_.factor(factor).reduce(q.lift(project_factor(factor, value)));
}

std::vector<IntVec> Filling::kernel_generators(int factor) const {
  std::vector<IntVec> out;
  if (const auto* k = spec_.kernel(factor)) {
    for (const auto& raw : *k) {
      IntVec v = base_.factor(factor).reduce(raw);
      if (!base_.factor(factor).is_zero(v)) out.push_back(std::move(v));
    }
  }
  return out;
}

std::optional<std::int64_t> Filling::girth(int peripheral_index) const {
  const auto& fac = base_.factor(peripheral_index);
  if (kernel_generators(peripheral_index).empty()) return std::nullopt;
  const auto& q = quotient_.factor(peripheral_index);
  for (std::int64_t r = 1;; ++r) {
    auto layer = fac.sphere(r);
    if (layer.empty()) return std::nullopt;
    for (const auto& v : layer) {
      if (q.is_zero(project_factor(peripheral_index, v))) return r;
    }
  }
}

std::optional<std::int64_t> Filling::girth() const {
  std::optional<std::int64_t> best;
  for (int i : base_.peripheral()) {
    auto g = girth(i);
    if (g && (!best || *g < *best)) best = g;
  }
  return best;
}

}  // namespace fillinglab

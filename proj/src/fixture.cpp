#include "fillinglab/fixture.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace fillinglab {

namespace {

const std::map<std::string, std::string>& builtin_texts() {
  static const std::map<std::string, std::string> texts = {
      {"FIX1",
       "name = FIX1\nfactor = Z\nfactor = Z\nperipheral = 0\ngenerators = x ; y\n"},
      {"FIX2",
       "name = FIX2\nfactor = Z^2\nfactor = Z\nperipheral = 0\ngenerators = a b ; y\n"},
      {"FIX3",
       "name = FIX3\nfactor = Z^2\nfactor = Z^2\nperipheral = 0 1\ngenerators = a b ; c d\n"},
      {"ZH", "name = ZH\nfactor = Z\nperipheral = 0\ngenerators = z\n"},
  };
  return texts;
}

std::vector<std::int64_t> parse_ints(const std::string& s, char sep) {
  std::vector<std::int64_t> out;
  for (const auto& part : split(s, sep)) {
    if (part.empty()) continue;
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("expected an integer, got '" + part + "'");
    }
    if (used != part.size()) throw std::invalid_argument("expected an integer, got '" + part + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Fixture parse_fixture(const KeyValueFile& kv) {
  Fixture fx;
  fx.name = kv.get("name").value_or("custom");
  fx.backend = kv.get("backend").value_or("normal-form");
  if (fx.backend != "normal-form") {
    throw std::invalid_argument("backend '" + fx.backend + "' is not available (only normal-form)");
  }
  std::vector<AbelianFactor> factors;
  for (const auto& f : kv.all("factor")) factors.push_back(AbelianFactor::parse(f));
  if (factors.empty()) throw std::invalid_argument("fixture has no 'factor' entries");
  auto periph_text = kv.get("peripheral");
  if (!periph_text) throw std::invalid_argument("fixture is missing key 'peripheral'");
  std::vector<int> peripheral;
  for (auto v : parse_ints(*periph_text, ' ')) peripheral.push_back(static_cast<int>(v));
  std::vector<std::vector<std::string>> names;
  if (auto g = kv.get("generators")) {
    for (const auto& group : split(*g, ';')) {
      std::vector<std::string> fn;
      std::istringstream in(group);
      std::string tok;
      while (in >> tok) fn.push_back(tok);
      names.push_back(std::move(fn));
    }
  }
  fx.ctx = GroupContext(std::move(factors), std::move(peripheral), std::move(names));
  return fx;
}

Fixture load_fixture_file(const std::filesystem::path& path) { return parse_fixture(KeyValueFile::load(path)); }

std::vector<std::string> builtin_fixture_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtin_texts()) out.push_back(k);
  return out;
}

std::string builtin_fixture_text(const std::string& name) {
  auto it = builtin_texts().find(name);
  if (it == builtin_texts().end()) throw std::invalid_argument("unknown fixture id '" + name + "'");
  return it->second;
}

Fixture builtin_fixture(const std::string& name) {
  return parse_fixture(KeyValueFile::parse(builtin_fixture_text(name)));
}

Fixture resolve_fixture(const std::string& name_or_path) {
  if (builtin_texts().count(name_or_path)) return builtin_fixture(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_fixture_file(name_or_path);
  throw std::invalid_argument("unknown fixture id '" + name_or_path + "'");
}

FillingSpec parse_slopes(const GroupContext& ctx, const std::string& text) {
  FillingSpec spec;
  const std::string t = trim(text);
  if (t.empty() || t == "none") return spec;
  auto parts = split(t, ';');
  const auto& periph = ctx.peripheral();
  if (parts.size() != 1 && parts.size() != periph.size()) {
    throw std::invalid_argument("slope list does not match the number of peripheral factors");
  }
  for (std::size_t k = 0; k < periph.size(); ++k) {
    const int idx = periph[k];
    auto vals = parse_ints(parts.size() == 1 ? parts[0] : parts[k], ',');
    const int n = ctx.factor(idx).num_generators();
    IntVec v;
    if (static_cast<int>(vals.size()) == n) {
      v = vals;
    } else if (vals.size() == 1 && n == 2) {
      v = {1, vals[0]};
    } else {
      throw std::invalid_argument("slope has the wrong number of coordinates for factor " + std::to_string(idx));
    }
    spec.kernels.push_back({idx, {v}});
  }
  return spec;
}

}  // namespace fillinglab

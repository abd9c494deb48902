#include "fillinglab/quotient.hpp"

#include "fillinglab/budget.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fillinglab {

QuotientContext::QuotientContext(GroupContext base, FillingSpec spec, const TruncationOptions& topt)
    : filling_(std::move(base), std::move(spec)) {
  trunc_.resize(quotient().factors().size());
  for (int i : quotient().peripheral()) trunc_[i] = truncation_depth(quotient().factor(i), topt);
}

const TruncationInfo& QuotientContext::truncation(int i) const {
  if (i < 0 || i >= static_cast<int>(trunc_.size()) || !trunc_[i]) {
    throw std::invalid_argument("no truncation depth for factor " + std::to_string(i));
  }
  return *trunc_[i];
}

std::int64_t QuotientContext::t(int i) const { return truncation(i).t; }

bool QuotientContext::any_finite_peripheral() const {
  for (int i : quotient().peripheral())
    if (finite_peripheral(i)) return true;
  return false;
}

std::vector<IntVec> QuotientContext::small_kernel_elements(int i, std::int64_t bound) const {
  const auto gens = filling_.kernel_generators(i);
  const auto& fac = base().factor(i);
  std::vector<IntVec> out;
  if (gens.empty()) return out;
  std::vector<std::int64_t> coef(gens.size(), -bound);
  while (true) {
    IntVec v = fac.zero();
    for (std::size_t j = 0; j < gens.size(); ++j) {
      IntVec raw = fac.lift(gens[j]);
      for (auto& x : raw) x *= coef[j];
      v = fac.add(v, fac.reduce(raw));
    }
    if (!fac.is_zero(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    std::size_t j = 0;
    while (j < coef.size() && coef[j] == bound) coef[j++] = -bound;
    if (j == coef.size()) break;
    ++coef[j];
  }
  std::stable_sort(out.begin(), out.end(), [&](const IntVec& a, const IntVec& b) {
    const auto la = fac.word_length(a), lb = fac.word_length(b);
    return la != lb ? la < lb : a < b;
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

GroupElement reduce_with(const Filling& f, const std::set<Center>& lookup, const GroupElement& g) {
  const auto& ctx = f.base();
  std::vector<Syllable> syl = g.syllables();
  std::size_t j = 0;
  while (j < syl.size()) {
    const int i = syl[j].factor;
    GroupElement prefix(std::vector<Syllable>(syl.begin(), syl.begin() + j));
    if (!ctx.is_peripheral(i) || !lookup.count(Center{prefix, i})) {
      ++j;
      continue;
    }
    IntVec r = f.reduce_mod_kernel(i, syl[j].value);
    if (!ctx.factor(i).is_zero(r)) {
      syl[j].value = std::move(r);
      ++j;
      continue;
    }
    GroupElement rest(std::vector<Syllable>(syl.begin() + j + 1, syl.end()));
    syl = ctx.multiply(prefix, rest).syllables();
    j = 0;
  }
  return GroupElement(std::move(syl));
}

}  // namespace

OrbitCanonicalizer::OrbitCanonicalizer(const Filling& filling, std::vector<Center> reps)
    : filling_(std::make_shared<const Filling>(filling)), reps_(std::move(reps)) {
  for (const auto& c : reps_) {
    if (!filling.base().is_peripheral(c.periph)) throw std::invalid_argument("center on a non-peripheral factor");
  }
  // Rep labels must themselves be canonical for the prefix scan; iterate to a
  // fixed point.
  std::set<Center> lookup(reps_.begin(), reps_.end());
  for (int round = 0;; ++round) {
    std::set<Center> next;
    for (const auto& c : lookup) {
      Center cc{filling.base().peripheral_coset_id(reduce_with(filling, lookup, c.label), c.periph), c.periph};
      next.insert(cc);
    }
    if (next.size() != lookup.size()) throw std::invalid_argument("two listed centers share a kernel orbit");
    if (next == lookup) break;
    if (round > 64) throw std::runtime_error("center canonicalization did not stabilize");
    lookup = std::move(next);
  }
  canon_reps_ = std::move(lookup);
}

GroupElement OrbitCanonicalizer::element(const GroupElement& g) const { return reduce_with(*filling_, canon_reps_, g); }

CuspedVertex OrbitCanonicalizer::vertex(const CuspedVertex& v) const { return {element(v.g), v.periph, v.depth}; }

Center OrbitCanonicalizer::center(const Center& c) const {
  return {filling_->base().peripheral_coset_id(element(c.label), c.periph), c.periph};
}

bool OrbitCanonicalizer::covers(const Center& c) const { return canon_reps_.count(center(c)) > 0; }

std::vector<std::vector<GroupElement>> OrbitCanonicalizer::factor_generators() const {
  const auto& ctx = filling_->base();
  std::vector<std::vector<GroupElement>> out;
  for (const auto& c : reps_) {
    std::vector<GroupElement> gens;
    for (const auto& k : filling_->kernel_generators(c.periph)) {
      gens.push_back(ctx.multiply(ctx.multiply_syllable(c.label, c.periph, k), ctx.inverse(c.label)));
    }
    out.push_back(std::move(gens));
  }
  return out;
}

// ---------------------------------------------------------------------------

CuspedVertex project_vertex(const Filling& f, const CuspedVertex& v) { return {f.project(v.g), v.periph, v.depth}; }

std::shared_ptr<CuspedSpace> quotient_space(const QuotientContext& q, bool truncate) {
  auto space = std::make_shared<CuspedSpace>(q.quotient());
  if (truncate)
    for (int i : q.quotient().peripheral()) space->set_depth_cap(i, q.t(i));
  return space;
}

QuotientBall quotient_cusped_ball(const QuotientContext& q, std::int64_t radius, bool truncate) {
  QuotientBall out;
  out.kind = truncate ? "T_G" : "X/K";
  out.space = quotient_space(q, truncate);
  out.ball = BallSnapshot::build(*out.space, out.space->cayley({}), radius);
  auto f = std::make_shared<Filling>(q.filling());
  out.project = [f](const CuspedVertex& v) { return project_vertex(*f, v); };
  out.finite_horoballs = q.any_finite_peripheral();
  return out;
}

std::shared_ptr<CuspedSpace> partial_quotient_space(const QuotientContext& q,
                                                    std::shared_ptr<const OrbitCanonicalizer> canon, bool truncate) {
  auto space = std::make_shared<CuspedSpace>(q.base());
  space->set_canonicalizer([canon](const CuspedVertex& v) { return canon->vertex(v); });
  if (truncate) {
    std::vector<std::int64_t> caps(q.base().factors().size(), kNoCap);
    for (int i : q.base().peripheral()) caps[i] = q.t(i);
    space->set_depth_cap_fn([canon, caps](const Center& c) { return canon->covers(c) ? caps[c.periph] : kNoCap; });
  }
  return space;
}

QuotientBall partial_quotient_ball(const QuotientContext& q, const std::vector<Center>& reps, std::int64_t radius,
                                   bool truncate) {
  auto canon = std::make_shared<const OrbitCanonicalizer>(q.filling(), reps);
  QuotientBall out;
  out.kind = truncate ? "T_W" : "X/K_W";
  out.space = partial_quotient_space(q, canon, truncate);
  out.ball = BallSnapshot::build(*out.space, out.space->cayley({}), radius);
  out.project = [canon](const CuspedVertex& v) { return canon->vertex(v); };
  out.finite_horoballs = q.any_finite_peripheral();
  return out;
}

// ---------------------------------------------------------------------------

EmbeddingReport ball_embedding_check(const QuotientContext& q, std::int64_t radius) {
  EmbeddingReport rep;
  rep.radius = radius;
  CuspedSpace xs(q.base());
  const auto qs = quotient_space(q, false);
  // Geodesics between points of B_R stay in B_2R, on both sides.
  const auto xb = BallSnapshot::build(xs, xs.cayley({}), 2 * radius);
  const auto qb = BallSnapshot::build(*qs, qs->cayley({}), 2 * radius);
  std::vector<int> s, img;
  std::map<int, int> seen;
  for (std::size_t i = 0; i < xb.size(); ++i) {
    if (xb.center_distance(static_cast<int>(i)) > radius) continue;
    auto qi = qb.index_of(project_vertex(q.filling(), xb.vertex(static_cast<int>(i))));
    if (!qi) throw std::logic_error("projection left the quotient ball");
    auto [it, fresh] = seen.emplace(*qi, static_cast<int>(i));
    if (!fresh && rep.isometric) {
      rep.isometric = false;
      rep.witness = {xb.vertex(it->second), xb.vertex(static_cast<int>(i))};
      rep.base_distance = xb.dist(it->second, static_cast<int>(i));
      rep.quotient_distance = 0;
    }
    s.push_back(static_cast<int>(i));
    img.push_back(*qi);
  }
  for (std::size_t a = 0; a < s.size() && rep.isometric; ++a) {
    auto rx = xb.row(s[a]);
    auto rq = qb.row(img[a]);
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      ++rep.pairs;
      if ((*rx)[s[b]] != (*rq)[img[b]]) {
        rep.isometric = false;
        rep.witness = {xb.vertex(s[a]), xb.vertex(s[b])};
        rep.base_distance = (*rx)[s[b]];
        rep.quotient_distance = (*rq)[img[b]];
        break;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::optional<GreendlingerStep> greendlinger_shorten(const QuotientContext& q, const GroupElement& g,
                                                     const GroupElement& basepoint, std::int64_t depth,
                                                     std::int64_t kernel_bound) {
  const auto& ctx = q.base();
  if (g.is_identity()) throw std::invalid_argument("shortening needs a nontrivial element");
  if (!q.filling().kernel_contains(g)) throw std::invalid_argument("element is not in the filling kernel");
  CuspedSpace xs(ctx);
  const CuspedVertex x = xs.cayley(basepoint);
  const CuspedVertex gx = xs.cayley(ctx.multiply(g, basepoint));
  constexpr std::int64_t kCap = 256;
  const auto before = implicit_distance(xs, x, gx, kCap);
  if (!before) throw BudgetExceeded("d(x, gx) exceeds the search cap");
  const auto path = implicit_geodesic(xs, x, gx, *before);
  std::vector<Center> centers;
  for (const auto& v : path) {
    if (v.is_cayley() || v.depth < depth) continue;
    Center c = xs.center_of(v);
    if (std::find(centers.begin(), centers.end(), c) == centers.end()) centers.push_back(c);
  }
  std::optional<GreendlingerStep> best;
  for (const auto& c : centers) {
    const GroupElement hinv = ctx.inverse(c.label);
    for (const auto& kappa : q.small_kernel_elements(c.periph, kernel_bound)) {
      GroupElement k = ctx.multiply(ctx.multiply_syllable(c.label, c.periph, kappa), hinv);
      GroupElement kg = ctx.multiply(k, g);
      const std::int64_t cap = best ? best->after - 1 : *before - 1;
      if (cap < 0) break;
      auto d = implicit_distance(xs, x, xs.cayley(ctx.multiply(kg, basepoint)), cap);
      if (d) best = GreendlingerStep{c, std::move(k), *before, *d};
    }
  }
  return best;
}

GreendlingerRun greendlinger_loop(const QuotientContext& q, const GroupElement& g, const GroupElement& basepoint,
                                  std::int64_t depth, std::size_t max_steps) {
  GreendlingerRun run;
  run.start = g;
  GroupElement cur = g;
  while (!cur.is_identity()) {
    if (run.steps.size() >= max_steps) {
      run.failure = "step limit reached";
      break;
    }
    auto step = greendlinger_shorten(q, cur, basepoint, depth);
    if (!step) {
      run.failure = "no horoball on the geodesic at the requested depth gives a shortening";
      break;
    }
    if (step->after >= step->before) run.strictly_decreasing = false;
    cur = q.base().multiply(step->k, cur);
    run.steps.push_back(std::move(*step));
  }
  run.terminated = cur.is_identity();
  return run;
}

// ---------------------------------------------------------------------------

VeryTranslatingReport very_translating_check(const QuotientContext& q, Rational theta, std::int64_t multiplier,
                                             std::int64_t a_depth, std::int64_t sample_radius,
                                             std::int64_t kernel_bound) {
  if (!(Rational(0) < theta)) throw std::invalid_argument("theta must be positive");
  const auto& ctx = q.base();
  CuspedSpace xs(ctx);
  VeryTranslatingReport rep;
  rep.multiplier = multiplier;
  rep.a_depth = a_depth;
  std::vector<CuspedVertex> xs_sample;
  for (const auto& [v, d] : implicit_ball(xs, xs.cayley({}), sample_radius))
    if (v.is_cayley() || v.depth < a_depth) xs_sample.push_back(v);
  for (int i : ctx.peripheral())
    for (std::int64_t l = 1; l < a_depth; ++l) xs_sample.push_back({GroupElement{}, i, l});
  std::sort(xs_sample.begin(), xs_sample.end(), [](const CuspedVertex& a, const CuspedVertex& b) {
    if (a.periph != b.periph) return a.periph < b.periph;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.g < b.g;
  });
  xs_sample.erase(std::unique(xs_sample.begin(), xs_sample.end()), xs_sample.end());
  bool first = true;
  for (int i : ctx.peripheral()) {
    for (const auto& kappa : q.small_kernel_elements(i, kernel_bound)) {
      const GroupElement g = ctx.from_syllable(i, kappa);
      for (const auto& x : xs_sample) {
        const CuspedVertex gx{ctx.multiply(g, x.g), x.periph, x.depth};
        const std::int64_t cap = first ? 1 << 20 : rep.worst_distance;
        auto d = implicit_distance(xs, x, gx, cap);
        ++rep.samples;
        if (!d) continue;
        if (first || *d < rep.worst_distance) {
          rep.worst_distance = *d;
          rep.worst_x = x;
          rep.worst_g = g;
          first = false;
        }
      }
    }
  }
  if (first) throw std::invalid_argument("no kernel elements to test");
  rep.worst_ratio = Rational(rep.worst_distance) / theta;
  rep.pass = !(rep.worst_ratio < Rational(multiplier));
  return rep;
}

}  // namespace fillinglab

#include "fillinglab/spiderweb.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "fillinglab/budget.hpp"
#include "fillinglab/hyperbolicity.hpp"

namespace fillinglab {

namespace {

std::int64_t scaled(Rational theta, std::int64_t m) {
  Rational v = theta * Rational(m);
  return (v.num() + v.den() - 1) / v.den();
}

std::vector<std::int32_t> bfs_row(const BallSnapshot& ball, int src) {
  std::vector<std::int32_t> d(ball.size(), BallSnapshot::kInf);
  std::vector<int> queue{src};
  d[src] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const int u = queue[h];
    for (int w : ball.neighbors(u)) {
      if (d[w] != BallSnapshot::kInf) continue;
      d[w] = d[u] + 1;
      queue.push_back(w);
    }
  }
  return d;
}

Center center_of(const GroupContext& ctx, const CuspedVertex& v) {
  return {ctx.peripheral_coset_id(v.g, v.periph), v.periph};
}

}  // namespace

Profile make_profile(const std::string& name, Rational theta) {
  Profile p;
  p.theta = theta;
  if (name == "desk") return p;
  if (name != "paper") throw std::invalid_argument("unknown profile '" + name + "' (paper|desk)");
  p.name = "paper";
  p.qc = scaled(theta, 4);
  p.grow = scaled(theta, 10);
  p.s2 = scaled(theta, 50);
  p.scan = scaled(theta, 100);
  p.a_depth = scaled(theta, 500);
  p.separation = scaled(theta, 1000);
  p.vtc = 10000;
  p.greendlinger_depth = p.a_depth;
  return p;
}

std::vector<std::pair<std::string, std::int64_t>> profile_table(const Profile& p) {
  return {{"qc", p.qc},         {"grow", p.grow},     {"s2", p.s2},           {"scan", p.scan},
          {"a_depth", p.a_depth}, {"separation", p.separation}, {"vtc", p.vtc}, {"greendlinger_depth", p.greendlinger_depth}};
}

SpiderContext::SpiderContext(std::shared_ptr<const QuotientContext> qctx, std::int64_t radius, Profile p)
    : q(std::move(qctx)), profile(std::move(p)) {
  CuspedSpace xs(q->base());
  if (xs.model().weighted()) throw std::invalid_argument("spiderwebs need the unweighted model");
  ball = BallSnapshot::build(xs, xs.cayley({}), radius);
}

std::vector<int> Spiderweb::members() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < in_w.size(); ++i)
    if (in_w[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::size_t Spiderweb::size() const { return static_cast<std::size_t>(std::count(in_w.begin(), in_w.end(), 1)); }

std::vector<char> neighborhood(const BallSnapshot& ball, const std::vector<char>& set, std::int64_t r) {
  std::vector<int> src;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set[i]) src.push_back(static_cast<int>(i));
  const auto d = distance_to_set(ball, src);
  std::vector<char> out(ball.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = d[i] <= r * ball.unit();
  return out;
}

std::vector<Center> centers_met(const SpiderContext& sc, const std::vector<char>& set) {
  std::vector<Center> out;
  std::set<Center> seen;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!set[i]) continue;
    const auto& v = sc.ball.vertex(static_cast<int>(i));
    if (v.is_cayley() || v.depth < sc.profile.a_depth) continue;
    Center c = center_of(sc.q->base(), v);
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  return out;
}

std::vector<char> saturated(const SpiderContext& sc, const Spiderweb& w) {
  OrbitCanonicalizer canon(sc.q->filling(), w.reps);
  std::vector<char> out = w.in_w;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = sc.ball.vertex(static_cast<int>(i));
    if (!v.is_cayley() && v.depth >= sc.profile.a_depth && canon.covers(center_of(sc.q->base(), v))) out[i] = 1;
  }
  return out;
}

Spiderweb initial_spiderweb(const SpiderContext& sc) {
  Spiderweb w;
  w.in_w.assign(sc.ball.size(), 0);
  w.in_w[sc.ball.center()] = 1;
  return w;
}

Spiderweb enlarge(const SpiderContext& sc, const Spiderweb& w) {
  const auto& ball = sc.ball;
  OrbitCanonicalizer old_canon(sc.q->filling(), w.reps);
  Spiderweb next;
  next.generation = w.generation + 1;
  next.reps = w.reps;
  const auto grown = neighborhood(ball, w.in_w, sc.profile.grow);
  const auto scanned = neighborhood(ball, w.in_w, sc.profile.scan);

  std::set<Center> fresh;
  for (const auto& c : centers_met(sc, scanned)) {
    if (old_canon.covers(c)) continue;
    Center rep = old_canon.center(c);
    if (fresh.insert(rep).second) next.added.push_back(rep);
  }
  if (next.added.empty()) {
    next.in_w = grown;
    next.grew_by_neighborhood = true;
    return next;
  }
  next.reps.insert(next.reps.end(), next.added.begin(), next.added.end());
  OrbitCanonicalizer canon(sc.q->filling(), next.reps);

  // K_W+ . N(W) inside the ball, by orbit canonical forms.
  std::unordered_set<CuspedVertex, CuspedVertexHash> seeds;
  for (std::size_t i = 0; i < grown.size(); ++i)
    if (grown[i]) seeds.insert(canon.vertex(ball.vertex(static_cast<int>(i))));
  std::vector<int> orbit;
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (seeds.count(canon.vertex(ball.vertex(static_cast<int>(i))))) orbit.push_back(static_cast<int>(i));

  // Union of all geodesics between certified orbit pairs: from each source,
  // walk the geodesic DAG backwards from the targets.
  next.in_w.assign(ball.size(), 0);
  for (int v : orbit) next.in_w[v] = 1;
  std::vector<char> on(ball.size());
  std::vector<std::vector<int>> layers;
  for (std::size_t a = 0; a < orbit.size(); ++a) {
    const int u = orbit[a];
    const auto r = bfs_row(ball, u);
    std::fill(on.begin(), on.end(), 0);
    bool any = false;
    for (std::size_t b = a + 1; b < orbit.size(); ++b) {
      const int t = orbit[b];
      const bool cert = ball.complete() ||
                        (r[t] < BallSnapshot::kInf &&
                         2 * std::max(ball.center_distance(u), ball.center_distance(t)) + r[t] <= 2 * ball.radius());
      if (cert) {
        on[t] = 1;
        any = true;
      } else {
        ++next.uncertified_pairs;
      }
    }
    if (!any) continue;
    layers.assign(1, {});
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (r[i] >= BallSnapshot::kInf) continue;
      if (static_cast<std::size_t>(r[i]) >= layers.size()) layers.resize(r[i] + 1);
      layers[r[i]].push_back(static_cast<int>(i));
    }
    for (std::size_t k = layers.size(); k-- > 0;) {
      for (int v : layers[k]) {
        if (!on[v]) {
          for (int x : ball.neighbors(v))
            if (r[x] == r[v] + 1 && on[x]) {
              on[v] = 1;
              break;
            }
        }
        if (on[v]) next.in_w[v] = 1;
      }
    }
  }
  // The hull is K_W+-invariant; pieces cut off by the ball come back as
  // translates of pieces that were found.
  std::unordered_set<CuspedVertex, CuspedVertexHash> hull_orbits;
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (next.in_w[i]) hull_orbits.insert(canon.vertex(ball.vertex(static_cast<int>(i))));
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (!next.in_w[i] && hull_orbits.count(canon.vertex(ball.vertex(static_cast<int>(i))))) next.in_w[i] = 1;
  return next;
}

// ---------------------------------------------------------------------------

GrowthReport kernel_growth_check(const GroupContext& ctx, const std::vector<GroupElement>& factor_gens,
                                 std::int64_t syllables, std::int64_t exponent_bound) {
  GrowthReport rep;
  rep.factors = factor_gens.size();
  rep.syllables = syllables;
  rep.exponent_bound = exponent_bound;
  const std::size_t m = factor_gens.size();
  // m (m-1)^{s-1} (2e)^s summed over s, plus the empty word.
  long double total = 1, layer = 0;
  for (std::int64_t s = 1; s <= syllables && m > 0; ++s) {
    layer = s == 1 ? static_cast<long double>(m) * 2 * exponent_bound
                   : layer * static_cast<long double>(m - 1) * 2 * exponent_bound;
    total += layer;
  }
  if (total > static_cast<long double>(budget::max_group_elements())) {
    throw BudgetExceeded("free-product word count exceeds the group element budget");
  }
  std::vector<std::vector<GroupElement>> powers(m);
  for (std::size_t j = 0; j < m; ++j) {
    const GroupElement inv = ctx.inverse(factor_gens[j]);
    for (std::int64_t e = -exponent_bound; e <= exponent_bound; ++e) {
      if (e == 0) continue;
      GroupElement p;
      for (std::int64_t k = 0; k < (e < 0 ? -e : e); ++k) p = ctx.multiply(p, e < 0 ? inv : factor_gens[j]);
      powers[j].push_back(std::move(p));
    }
  }
  std::unordered_set<GroupElement> seen;
  struct Frame {
    GroupElement g;
    std::int64_t len;
    std::size_t last;
  };
  std::vector<Frame> stack{{GroupElement{}, 0, m}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    ++rep.expected;
    seen.insert(f.g);
    if (f.len == syllables) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == f.last) continue;
      for (const auto& p : powers[j]) stack.push_back({ctx.multiply(f.g, p), f.len + 1, j});
    }
  }
  rep.observed = seen.size();
  return rep;
}

std::vector<GroupElement> web_factor_generators(const SpiderContext& sc, const Spiderweb& w) {
  OrbitCanonicalizer canon(sc.q->filling(), w.reps);
  std::vector<GroupElement> out;
  for (const auto& gens : canon.factor_generators()) {
    if (gens.size() != 1) throw std::invalid_argument("growth check expects cyclic stabilizer kernels");
    out.push_back(gens.front());
  }
  return out;
}

AxiomReport verify_axioms(const SpiderContext& sc, const Spiderweb& w, std::int64_t margin) {
  const auto& ball = sc.ball;
  const auto& ctx = sc.q->base();
  AxiomReport rep;
  const auto members = w.members();
  rep.s1_defect = quasiconvexity_defect(ball, members);
  rep.s1 = !(Rational(sc.profile.qc) < rep.s1_defect);

  const std::int64_t inner = ball.radius() - margin * ball.unit();
  auto near = neighborhood(ball, w.in_w, sc.profile.s2);
  for (std::size_t i = 0; i < near.size(); ++i)
    if (ball.center_distance(static_cast<int>(i)) > inner) near[i] = 0;
  rep.s2 = true;
  OrbitCanonicalizer canon(sc.q->filling(), w.reps);
  for (const auto& c : centers_met(sc, near)) {
    if (canon.covers(c)) continue;
    rep.s2 = false;
    rep.s2_witness = sc.q->base().format(c.label) + " P" + std::to_string(c.periph);
    break;
  }

  rep.s3 = true;
  std::vector<GroupElement> gens;
  for (const auto& fg : canon.factor_generators())
    for (const auto& k : fg) {
      gens.push_back(k);
      gens.push_back(ctx.inverse(k));
    }
  for (int v : members) {
    if (ball.center_distance(v) > inner) continue;
    const auto& x = ball.vertex(v);
    for (const auto& k : gens) {
      auto j = ball.index_of({ctx.multiply(k, x.g), x.periph, x.depth});
      if (!j) {
        ++rep.s3_skipped;
        continue;
      }
      ++rep.s3_checked;
      if (!w.in_w[*j] && rep.s3) {
        rep.s3 = false;
        rep.s3_witness = ball.label(v) + " -> " + ball.label(*j);
      }
    }
  }
  try {
    rep.s4 = kernel_growth_check(ctx, web_factor_generators(sc, w), 4);
    rep.s4_checked = true;
  } catch (const BudgetExceeded& e) {
    rep.s4_skipped = e.what();
  }
  return rep;
}

ExhaustReport exhaust(const SpiderContext& sc, std::size_t max_generations) {
  ExhaustReport rep;
  rep.margin = sc.profile.scan;
  const std::int64_t inner = sc.ball.radius() - rep.margin * sc.ball.unit();
  auto covered = [&](const Spiderweb& w) {
    for (std::size_t i = 0; i < sc.ball.size(); ++i) {
      if (sc.ball.vertex(static_cast<int>(i)).is_cayley() && sc.ball.center_distance(static_cast<int>(i)) <= inner &&
          !w.in_w[i])
        return false;
    }
    return true;
  };
  rep.webs.push_back(initial_spiderweb(sc));
  while (true) {
    if (!rep.covered && covered(rep.webs.back())) {
      rep.covered = true;
      rep.covered_at = rep.webs.back().generation;
    }
    if (rep.webs.size() > max_generations) {
      rep.stop_reason = "generation limit";
      break;
    }
    Spiderweb next = enlarge(sc, rep.webs.back());
    const auto& prev = rep.webs.back();
    for (std::size_t i = 0; i < prev.in_w.size(); ++i)
      if (prev.in_w[i] && !next.in_w[i]) rep.nested = false;
    const bool same = next.in_w == prev.in_w && next.added.empty();
    rep.webs.push_back(std::move(next));
    if (same) {
      rep.stop_reason = "ball exhausted";
      break;
    }
  }
  return rep;
}

}  // namespace fillinglab

#include "fillinglab/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fillinglab {

namespace {

struct GammaTable {
  std::vector<IntVec> points;
  std::vector<std::int64_t> d;  // word distances, row-major
};

GammaTable gamma_table(const AbelianFactor& gamma, std::int64_t radius) {
  GammaTable t;
  t.points = gamma.is_finite() ? gamma.ball(std::numeric_limits<std::int64_t>::max() / 4) : gamma.ball(radius);
  const std::size_t n = t.points.size();
  t.d.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const IntVec neg = gamma.negate(t.points[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t w = gamma.word_length(gamma.add(neg, t.points[j]));
      t.d[i * n + j] = t.d[j * n + i] = w;
    }
  }
  return t;
}

std::int64_t ceil_shift(std::int64_t d, std::int64_t k) {
  if (k >= 62) return d == 0 ? 0 : 1;
  const std::int64_t s = std::int64_t{1} << k;
  return (d + s - 1) / s;
}

Rational theta_at(const GammaTable& g, std::int64_t k, const TruncationOptions& opt, std::string* policy) {
  const std::size_t n = g.points.size();
  std::vector<std::int32_t> m(n * n);
  for (std::size_t i = 0; i < n * n; ++i) m[i] = static_cast<std::int32_t>(ceil_shift(g.d[i], k));
  if (n <= opt.exhaustive_cap) {
    if (policy) *policy = "exhaustive";
    return four_point_theta_table(m, n, {0});
  }
  if (policy) *policy = "sampled";
  Sampler rng(opt.seed + static_cast<std::uint64_t>(k));
  std::int64_t best = 0;
  for (std::uint64_t s = 0; s < opt.samples; ++s) {
    const std::size_t b = rng.below(n), c = rng.below(n), d = rng.below(n);
    const std::int64_t s1 = m[b] + m[c * n + d], s2 = m[c] + m[b * n + d], s3 = m[d] + m[b * n + c];
    const std::int64_t hi = std::max({s1, s2, s3}), lo = std::min({s1, s2, s3});
    best = std::max(best, hi - (s1 + s2 + s3 - hi - lo));
  }
  return Rational(best, 2);
}

std::string describe_gamma(const AbelianFactor& gamma) {
  std::ostringstream os;
  os << gamma.describe() << " gens";
  for (int j = 0; j < gamma.num_generators(); ++j) {
    os << (j ? ";" : " ");
    auto g = gamma.generator(j);
    for (std::size_t c = 0; c < g.size(); ++c) os << (c ? "," : "") << g[c];
  }
  return os.str();
}

}  // namespace

Rational horosphere_theta(const AbelianFactor& gamma, std::int64_t k, const TruncationOptions& opt, std::string* policy,
                          std::size_t* points) {
  auto table = gamma_table(gamma, opt.certify_radius);
  if (points) *points = table.points.size();
  return theta_at(table, k, opt, policy);
}

TruncationInfo truncation_depth(const AbelianFactor& gamma, const TruncationOptions& opt) {
  TruncationInfo info;
  info.graph = describe_gamma(gamma);
  info.certification_radius = gamma.is_finite() ? -1 : opt.certify_radius;
  auto table = gamma_table(gamma, opt.certify_radius);
  info.points = table.points.size();
  for (std::int64_t k = 0; k <= opt.max_depth; ++k) {
    std::string pol;
    Rational th = theta_at(table, k, opt, &pol);
    info.policy = pol;
    info.theta_by_depth.push_back(th);
    if (k == 0) info.log2_theta = th.num() > 0 ? std::log2(th.to_double()) : 0.0;
    if (th <= Rational(opt.slack_bound, 2)) {
      info.t = k;
      return info;
    }
  }
  throw std::runtime_error("no depth up to max_depth satisfies the 4-point bound");
}

CuspedSpace horoball_space(const AbelianFactor& gamma, std::int64_t a, std::int64_t t, const HoroballModel& model) {
  if (a < 0 || t < a) throw std::invalid_argument("empty depth window");
  CuspedSpace space(GroupContext({gamma}, {0}), model);
  if (t != kNoCap) space.set_depth_cap(0, t);
  space.set_min_level(a);
  return space;
}

CuspedVertex horoball_point(const CuspedSpace& space, const IntVec& m, std::int64_t level) {
  GroupElement g = space.context().from_syllable(0, m);
  if (level == 0) return space.cayley(g);
  return space.canonical({g, 0, level});
}

BallSnapshot truncated_ball(const AbelianFactor& gamma, std::int64_t a, std::int64_t t, std::int64_t radius) {
  auto space = horoball_space(gamma, a, t);
  return BallSnapshot::build(space, horoball_point(space, gamma.zero(), a), radius);
}

GeodesicShape geodesic_shape(const CuspedSpace& horoball, const IntVec& m1, std::int64_t n1, const IntVec& m2,
                             std::int64_t n2) {
  const auto& gamma = horoball.context().factor(0);
  const auto& model = horoball.model();
  const std::int64_t d = gamma.distance(m1, m2);
  const std::int64_t lo = horoball.min_level();
  const std::int64_t hi = horoball.depth_cap(Center{{}, 0});
  GeodesicShape best;
  best.length = -1;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const std::int64_t reach = model.reach(k);
    const std::int64_t h = d == 0 ? 0 : (d + reach - 1) / reach;
    const std::int64_t len = std::llabs(n1 - k) + std::llabs(n2 - k) + h;
    if (best.length < 0 || len < best.length || (len == best.length && h < best.horizontal)) {
      best.length = len;
      best.horizontal = h;
      best.level = k;
      best.down = k - n1;
      best.up = n2 - k;
    }
    if (reach >= d && k >= std::max(n1, n2)) break;
  }
  // Realize it: vertical, horizontal chunks along a Γ-geodesic word, vertical.
  std::vector<IntVec> gens;
  for (int j = 0; j < gamma.num_generators(); ++j)
    for (int s : {1, -1}) {
      auto g = gamma.generator(j, s);
      if (!gamma.is_zero(g) && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    }
  auto& path = best.path;
  const std::int64_t k = best.level;
  for (std::int64_t n = n1; n != k; n += (k > n1 ? 1 : -1)) path.push_back(horoball_point(horoball, m1, n));
  path.push_back(horoball_point(horoball, m1, k));
  IntVec cur = m1;
  std::int64_t remaining = d;
  const std::int64_t reach = model.reach(k);
  while (remaining > 0) {
    for (std::int64_t step = 0; step < reach && remaining > 0; ++step) {
      bool moved = false;
      for (const auto& g : gens) {
        IntVec nxt = gamma.add(cur, g);
        if (gamma.distance(nxt, m2) == remaining - 1) {
          cur = std::move(nxt);
          --remaining;
          moved = true;
          break;
        }
      }
      if (!moved) throw std::logic_error("no geodesic step in the peripheral graph");
    }
    path.push_back(horoball_point(horoball, cur, k));
  }
  for (std::int64_t n = k; n != n2;) {
    n += (n2 > k ? 1 : -1);
    path.push_back(horoball_point(horoball, m2, n));
  }
  return best;
}

VisibilityCheck local_visibility_check(const AbelianFactor& gamma, std::int64_t t, std::int64_t a,
                                       std::int64_t lambda, std::uint64_t samples, std::uint64_t seed) {
  if (lambda <= 0 || lambda >= t) throw std::invalid_argument("need 0 < lambda < t");
  if (a < lambda || a > t) throw std::invalid_argument("need lambda <= a <= t");
  auto space = horoball_space(gamma, a - lambda, t);
  VisibilityCheck out;
  Sampler rng(seed);
  for (std::int64_t dp = a; dp <= t; ++dp) {
    const CuspedVertex p = horoball_point(space, gamma.zero(), dp);
    const auto ball = BallSnapshot::build(space, p, 3 * lambda);
    const std::size_t n = ball.size();
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return ball.center_distance(x) > ball.center_distance(y); });
    std::vector<char> ext(n, 0);
    for (int v : order) {
      const std::int64_t cd = ball.center_distance(v);
      if (cd > 2 * lambda) continue;
      if (cd == 2 * lambda) {
        ext[v] = 1;
        continue;
      }
      for (int w : ball.neighbors(v))
        if (ball.center_distance(w) == cd + 1 && ext[w]) {
          ext[v] = 1;
          break;
        }
    }
    std::vector<int> set;
    for (std::size_t i = 0; i < n; ++i)
      if (ext[i]) set.push_back(static_cast<int>(i));
    if (set.empty()) continue;
    const auto dist = distance_to_set(ball, set);
    std::vector<int> qs;
    for (std::size_t i = 0; i < n; ++i)
      if (ball.center_distance(static_cast<int>(i)) == lambda && ball.level(static_cast<int>(i)) >= a &&
          !(a > 0 && ball.vertex(static_cast<int>(i)).is_cayley()))
        qs.push_back(static_cast<int>(i));
    std::vector<int> tested = qs;
    if (qs.size() > samples) {
      tested.clear();
      for (std::uint64_t s = 0; s < samples; ++s) tested.push_back(qs[rng.below(qs.size())]);
    }
    for (int q : tested) {
      ++out.pairs;
      if (Rational(dist[q]) > out.worst_defect || out.worst_pair.empty()) {
        if (Rational(dist[q]) > out.worst_defect) out.worst_defect = Rational(dist[q]);
        out.worst_pair = {p, ball.vertex(q)};
      }
    }
  }
  if (out.pairs == 0) throw std::runtime_error("no qualifying pairs at distance lambda");
  return out;
}

}  // namespace fillinglab

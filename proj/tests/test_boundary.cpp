#include "doctest.h"

#include "fillinglab/boundary.hpp"
#include "fillinglab/fixture.hpp"
#include "fillinglab/topology.hpp"
#include "helpers.hpp"

using namespace fillinglab;
using testing_support::to_word;

namespace {

// Cayley tree of the free group on x, y: FIX1 without horoballs.
BallSnapshot tree_ball(std::int64_t radius) {
  CuspedSpace xs(builtin_fixture("FIX1").ctx);
  xs.set_depth_cap(0, 0);
  return BallSnapshot::build(xs, xs.cayley({}), radius);
}

std::string letters(const oracle::Word& w) {
  std::string s;
  for (auto [l, e] : w.syl) s += std::string(static_cast<std::size_t>(std::llabs(e)), e > 0 ? l : static_cast<char>(l - 32));
  return s;
}

std::size_t common_prefix(const std::string& a, const std::string& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

std::vector<double> random_table(std::size_t n, std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<double> d(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = 0.05 + rng.unit();
  return d;
}

}  // namespace

TEST_CASE("tree sphere products are branch times") {
  const auto ball = tree_ball(4);
  for (double eps : {0.25, 0.5, 1.0}) {
    const auto a = sphere_approx(ball, 2, eps);
    REQUIRE(a.size() == 12);
    CHECK(a.uncertified == 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) {
        const auto li = letters(to_word(a.vertices[i].g)), lj = letters(to_word(a.vertices[j].g));
        const auto k = static_cast<std::int64_t>(i == j ? 2 : common_prefix(li, lj));
        CHECK(a.gromov(i, j) == Rational(k));
        if (i != j) CHECK(a.rho(i, j) == doctest::Approx(std::exp(-eps * static_cast<double>(k))));
      }
    const auto m = chain_metric(a);
    CHECK(m.triangle_ok);
    CHECK(m.kappa_hat == doctest::Approx(1.0));
  }
  CHECK(sphere_approx(tree_ball(3), 2, 0.5).uncertified > 0);
  CHECK_THROWS(sphere_approx(ball, 5, 0.5));
  CHECK_THROWS(sphere_approx(ball, 1, 0));
}

TEST_CASE("chain metric is the shortest-chain closure") {
  for (std::size_t n : {2, 3, 5, 9}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto rho = random_table(n, seed * 31 + n);
      const auto ref = oracle::chain_closure(rho, n);
      const auto m = chain_metric(rho, n);
      CHECK(m.triangle_ok);
      CHECK(satisfies_triangle(m.table, n));
      double kappa = 1;
      for (std::size_t i = 0; i < n * n; ++i) {
        CHECK(m.table[i] == doctest::Approx(ref[i]));
        if (ref[i] > 0) kappa = std::max(kappa, rho[i] / ref[i]);
      }
      CHECK(m.kappa_hat == doctest::Approx(kappa));
    }
  }
  // an ultrametric is already a metric
  const std::vector<double> u = {0, 1, 2, 1, 0, 2, 2, 2, 0};
  const auto m = chain_metric(u, 3);
  CHECK(m.table == u);
  CHECK(m.kappa_hat == 1.0);
  CHECK_FALSE(satisfies_triangle({0, 1, 3, 1, 0, 1, 3, 1, 0}, 3));
}

TEST_CASE("GH estimate against exhaustive maps") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t na = 3 + seed % 3, nb = 3 + (seed / 2) % 3;
    const auto a = chain_metric(random_table(na, seed), na).table;
    const auto b = chain_metric(random_table(nb, seed + 100), nb).table;
    const double best = oracle::exhaustive_gh(a, na, b, nb);
    GHOptions opt;
    opt.seed = seed;
    const auto rep = weak_gh_estimate(a, na, b, nb, opt);
    CHECK(rep.epsilon >= best - 1e-12);
    CHECK(rep.lower_bound <= best + 1e-12);
    CHECK(rep.epsilon == doctest::Approx(qi_defect(a, na, b, nb, rep.map, 1.0)));
    CHECK(rep.epsilon == doctest::Approx(std::max(rep.distortion, rep.coverage)));
  }
  const auto a = chain_metric(random_table(6, 7), 6).table;
  const auto self = weak_gh_estimate(a, 6, a, 6);
  CHECK(self.epsilon == 0.0);
  CHECK(self.lower_bound == 0.0);
  const std::vector<double> one = {0};
  CHECK(weak_gh_estimate(one, 1, a, 6).lower_bound > 0);
  GHOptions bad;
  bad.lambda = 0.5;
  CHECK_THROWS(weak_gh_estimate(a, 6, a, 6, bad));
}

TEST_CASE("linear connectedness") {
  const std::size_t n = 24;
  const auto d = circle_points(n);
  const auto rep = linear_connectedness(d, n);
  CHECK_FALSE(rep.disconnected);
  CHECK(std::isfinite(rep.L));
  CHECK(rep.pairs + rep.below_floor == n * (n - 1) / 2);
  for (const auto& c : rep.witnesses) {
    const double dpq = d[c.front() * n + c.back()];
    for (std::size_t k = 0; k + 1 < c.size(); ++k) CHECK(d[c[k] * n + c[k + 1]] <= dpq / 2 + 1e-12);
    CHECK(chain_diameter(d, n, c) <= rep.L * dpq + 1e-12);
  }
  // L starts at 1; a recorded worst chain realizes it
  CHECK(rep.L >= 1);
  if (!rep.worst_chain.empty()) {
    const double dw = d[rep.worst_p * n + rep.worst_q];
    CHECK(chain_diameter(d, n, rep.worst_chain) / dw == doctest::Approx(rep.L));
  } else {
    CHECK(rep.L == 1);
  }

  // two far clusters: some pair has no chain with short steps
  std::vector<std::array<double, 3>> pts = {{0, 0, 0}, {0.1, 0, 0}, {10, 0, 0}, {10.1, 0, 0}};
  const auto two = euclidean_table(pts);
  const auto split = linear_connectedness(two, 4, 0);
  CHECK(split.disconnected);
  CHECK(std::isinf(split.L));
  CHECK_THROWS(linear_connectedness({0}, 1));
}

TEST_CASE("peripheral marking") {
  const auto fx = builtin_fixture("FIX1");
  CuspedSpace xs(fx.ctx);
  const auto ball = BallSnapshot::build(xs, xs.cayley({}), 4);
  auto a = sphere_approx(ball, 2, 0.5);
  mark_peripheral(a, ball, xs);
  CHECK(a.components.empty());
  CHECK(a.density_delta == 0);

  const QuotientContext q(fx.ctx, parse_slopes(fx.ctx, "32"));
  REQUIRE(q.t(0) >= 1);
  const auto tw = partial_quotient_ball(q, {{GroupElement{}, 0}}, 4, true);
  auto b = sphere_approx(tw.ball, 2, 0.5);
  mark_peripheral(b, tw.ball, *tw.space);
  REQUIRE_FALSE(b.components.empty());
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.marking[i] >= 0) {
      CHECK(b.vertices[i].depth == q.t(0));
      CHECK(b.components[b.marking[i]] == tw.space->format(tw.space->center_of(b.vertices[i])));
    }
  CHECK(auto_epsilon(Rational(0)) == doctest::Approx(1.0 / 3));
  CHECK(auto_epsilon(Rational(2)) == doctest::Approx(1.0 / 12));
}

TEST_CASE("strong convergence") {
  const auto fx = builtin_fixture("FIX1");
  const QuotientContext q(fx.ctx, parse_slopes(fx.ctx, "8"));
  const auto tg = quotient_cusped_ball(q, 4, true);
  const auto w0 = partial_quotient_ball(q, {}, 4, true);
  CHECK(strong_convergence_check(w0, tg, 0).isometric);
  const auto r2 = strong_convergence_check(w0, tg, 2);
  CHECK_FALSE(r2.isometric);
  CHECK_FALSE(r2.failure.empty());
  CHECK(strong_convergence_check(tg, tg, 2).isometric);
  CHECK_THROWS(strong_convergence_check(w0, tg, 3));
}

TEST_CASE("sphere projection on the tree") {
  const auto ball = tree_ball(6);
  const double eps = std::log(2.0);
  for (std::int64_t r = 1; r <= 4; ++r) {
    const auto got = projection_distortion(ball, r, r + 1, eps);
    // oracle: prefixes of reduced words
    std::vector<std::string> outer;
    for (const auto& v : ball.vertices())
      if (static_cast<std::int64_t>(letters(to_word(v.g)).size()) == r + 1) outer.push_back(letters(to_word(v.g)));
    double c = 0;
    for (std::size_t i = 0; i < outer.size(); ++i)
      for (std::size_t j = i + 1; j < outer.size(); ++j) {
        const double big = std::exp(-eps * static_cast<double>(common_prefix(outer[i], outer[j])));
        const auto pi = outer[i].substr(0, r), pj = outer[j].substr(0, r);
        const double small = pi == pj ? 0.0 : std::exp(-eps * static_cast<double>(common_prefix(pi, pj)));
        c = std::max(c, std::abs(small - big));
      }
    CHECK(got.points == outer.size());
    CHECK(got.additive == doctest::Approx(c));
    CHECK(got.additive == doctest::Approx(std::pow(0.5, static_cast<double>(r))));
  }
}

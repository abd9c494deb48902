#include "doctest.h"

#include "fillinglab/truncation.hpp"
#include "helpers.hpp"

using namespace fillinglab;

namespace {

std::int64_t ceil_div(std::int64_t d, std::int64_t k) { return (d + (std::int64_t{1} << k) - 1) >> k; }

// Brute-force slack (in halves) of the depth-k horosphere metric on a
// finite abelian group given by its word-distance function.
template <class Dist>
std::int64_t horosphere_slack(int n, std::int64_t k, Dist dist) {
  std::vector<std::vector<int>> d(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = static_cast<int>(ceil_div(dist(i, j), k));
  return oracle::four_point_slack(d);
}

template <class Dist>
std::int64_t oracle_t(int n, Dist dist) {
  for (std::int64_t k = 0;; ++k)
    if (horosphere_slack(n, k, dist) <= 10) return k;
}

std::int64_t cyclic(int n, int i, int j) { return std::min((i - j + n) % n, (j - i + n) % n); }

// Horoball over Z with levels in [a, t] (level 0 is the Cayley line).
std::map<std::pair<std::int64_t, std::int64_t>, int> window_bfs(std::int64_t m, std::int64_t n, std::int64_t a,
                                                                 std::int64_t t, int limit) {
  std::map<std::pair<std::int64_t, std::int64_t>, int> dist{{{m, n}, 0}};
  std::deque<std::pair<std::int64_t, std::int64_t>> q{{m, n}};
  while (!q.empty()) {
    auto [x, k] = q.front();
    q.pop_front();
    const int d = dist[{x, k}];
    if (d == limit) continue;
    std::vector<std::pair<std::int64_t, std::int64_t>> nb;
    if (k + 1 <= t) nb.push_back({x, k + 1});
    if (k - 1 >= a) nb.push_back({x, k - 1});
    const std::int64_t reach = std::int64_t{1} << k;
    for (std::int64_t j = -reach; j <= reach; ++j)
      if (j) nb.push_back({x + j, k});
    for (auto& w : nb)
      if (!dist.count(w)) {
        dist[w] = d + 1;
        q.push_back(w);
      }
  }
  return dist;
}

}  // namespace

TEST_CASE("truncation depth of finite groups against brute force") {
  CHECK(truncation_depth(AbelianFactor::parse("Z/2")).t == 0);
  for (int n : {8, 16, 32, 64, 128}) {
    const auto info = truncation_depth(AbelianFactor::parse("Z/" + std::to_string(n)));
    CHECK(info.t == oracle_t(n, [&](int i, int j) { return cyclic(n, i, j); }));
    CHECK(info.certification_radius == -1);
    CHECK(info.points == static_cast<std::size_t>(n));
    REQUIRE(info.theta_by_depth.size() == static_cast<std::size_t>(info.t + 1));
    for (std::int64_t k = 0; k <= info.t; ++k)
      CHECK(info.theta_by_depth[k] == Rational(horosphere_slack(n, k, [&](int i, int j) { return cyclic(n, i, j); }), 2));
  }
  for (int s : {4, 8}) {
    auto dist = [&](int i, int j) { return cyclic(s, i % s, j % s) + cyclic(s, i / s, j / s); };
    const auto info = truncation_depth(AbelianFactor::parse("Z/" + std::to_string(s) + "+Z/" + std::to_string(s)));
    CHECK(info.t == oracle_t(s * s, dist));
  }
}

TEST_CASE("horosphere theta of Z on a certified window") {
  TruncationOptions opt;
  opt.certify_radius = 12;
  std::size_t pts = 0;
  const auto th = horosphere_theta(AbelianFactor::parse("Z"), 0, opt, nullptr, &pts);
  CHECK(pts == 25);
  CHECK(th == Rational(0));
  for (std::int64_t k = 1; k <= 3; ++k) {
    std::vector<std::vector<int>> d(25, std::vector<int>(25));
    for (int i = 0; i < 25; ++i)
      for (int j = 0; j < 25; ++j) d[i][j] = static_cast<int>(ceil_div(std::abs(i - j), k));
    CHECK(horosphere_theta(AbelianFactor::parse("Z"), k, opt) == Rational(oracle::four_point_slack(d), 2));
  }
  CHECK(truncation_depth(AbelianFactor::parse("Z"), opt).t == 0);
}

TEST_CASE("horoball windows") {
  const auto z8 = AbelianFactor::parse("Z/8");
  const auto flat = truncated_ball(z8, 0, 0, 10);
  CHECK(flat.size() == 8);
  CHECK(flat.edge_count() == 8);
  const auto top = truncated_ball(z8, 3, 3, 10);
  CHECK(top.size() == 8);  // one level, every pair within reach 8
  CHECK(top.edge_count() == 28);
  CHECK_THROWS(horoball_space(z8, 3, 2));
  const auto w = truncated_ball(z8, 1, 2, 10);
  CHECK(w.size() == 16);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.level(static_cast<int>(i)) >= 1);
}

TEST_CASE("geodesic shapes match window distances") {
  const auto z = AbelianFactor::parse("Z");
  struct Window {
    std::int64_t a, t;
  };
  for (const auto [a, t] : {Window{0, 64}, Window{0, 2}, Window{1, 3}, Window{2, 6}}) {
    const auto h = horoball_space(z, a, t);
    for (std::int64_t n1 = a; n1 <= std::min<std::int64_t>(t, a + 2); ++n1) {
      const auto ref = window_bfs(0, n1, a, t, 9);
      for (std::int64_t m2 = 0; m2 <= 20; m2 += 3)
        for (std::int64_t n2 = a; n2 <= std::min<std::int64_t>(t, a + 3); ++n2) {
          const auto it = ref.find({m2, n2});
          if (it == ref.end()) continue;
          const auto s = geodesic_shape(h, {0}, n1, {m2}, n2);
          CHECK(s.length == it->second);
          REQUIRE(static_cast<std::int64_t>(s.path.size()) == s.length + 1);
          CHECK(s.path.front() == horoball_point(h, {0}, n1));
          CHECK(s.path.back() == horoball_point(h, {m2}, n2));
          CHECK(s.length == std::llabs(s.down) + s.horizontal + std::llabs(s.up));
          CHECK(s.level >= a);
          CHECK(s.level <= t);
          for (std::size_t i = 0; i + 1 < s.path.size(); ++i) {
            const auto& p = s.path[i];
            const auto& r = s.path[i + 1];
            const auto pm = p.g.is_identity() ? 0 : p.g.syllables()[0].value[0];
            const auto rm = r.g.is_identity() ? 0 : r.g.syllables()[0].value[0];
            const bool vertical = pm == rm && std::llabs(p.depth - r.depth) == 1;
            const bool horizontal =
                p.depth == r.depth && rm != pm && std::llabs(rm - pm) <= (std::int64_t{1} << p.depth);
            CHECK((vertical || horizontal));
          }
        }
    }
  }
  const auto s = geodesic_shape(horoball_space(z, 0, 64), {0}, 0, {8}, 0);
  CHECK(s.length == 6);
  CHECK(s.path.size() == 7);
  CHECK(s.horizontal == 2);
  CHECK(s.level == 2);
  CHECK(s.down == 2);
  CHECK(s.up == -2);
}

TEST_CASE("local visibility") {
  const auto z = AbelianFactor::parse("Z");
  const auto v = local_visibility_check(z, 6, 3, 2, 200, 1);
  CHECK(v.pairs > 0);
  CHECK(v.worst_defect >= Rational(0));
  CHECK(v.worst_defect <= Rational(2));
  CHECK(v.worst_pair.size() == 2);
  const auto again = local_visibility_check(z, 6, 3, 2, 200, 1);
  CHECK(again.worst_defect == v.worst_defect);
  CHECK(again.pairs == v.pairs);
  CHECK_THROWS(local_visibility_check(z, 6, 1, 2, 10, 1));
  CHECK_THROWS(local_visibility_check(z, 6, 3, 6, 10, 1));
}

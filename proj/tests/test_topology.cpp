#include "doctest.h"

#include "fillinglab/topology.hpp"
#include "fillinglab/util.hpp"
#include "helpers.hpp"

using namespace fillinglab;

namespace {

std::vector<double> octahedron() {
  return euclidean_table({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
}

std::vector<double> random_cloud(std::size_t n, std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<std::array<double, 3>> pts(n);
  for (auto& p : pts) p = {rng.unit(), rng.unit(), rng.unit()};
  return euclidean_table(pts);
}

Betti oracle_betti(const std::vector<double>& d, std::size_t n, double s) {
  const auto b = oracle::CliqueOracle(d, n, s).betti();
  return {b[0], b[1], b[2]};
}

}  // namespace

TEST_CASE("betti numbers of small complexes") {
  const auto oct = octahedron();
  const auto c = rips_skeleton(oct, 6, 1.5);
  CHECK(c.count(0) == 6);
  CHECK(c.count(1) == 12);
  CHECK(c.count(2) == 8);
  CHECK(c.count(3) == 0);
  CHECK(betti_gf2(c) == Betti{1, 0, 1});
  CHECK(betti_gf2(rips_skeleton(oct, 6, 2.5)) == Betti{1, 0, 0});

  for (std::size_t n : {4, 5, 8, 24}) {
    const auto d = circle_points(n);
    const double step = d[1];
    CHECK(betti_gf2(rips_skeleton(d, n, step * 1.001)) == Betti{1, 1, 0});
  }
  for (std::size_t m : {1, 3, 7}) CHECK(betti_gf2(rips_skeleton(isolated_points(m), m, 0.5)) == Betti{static_cast<std::int64_t>(m), 0, 0});
  CHECK(format_betti({1, 0, 1}) == "(1,0,1)");
}

TEST_CASE("betti numbers agree with the dense rank oracle") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const std::size_t n = 12 + seed;
    const auto d = random_cloud(n, seed);
    for (double s : {0.2, 0.35, 0.5, 0.7}) {
      const auto c = rips_skeleton(d, n, s);
      const oracle::CliqueOracle o(d, n, s);
      for (int k = 0; k <= 3; ++k) CHECK(c.count(k) == o.simplices[k].size());
      for (int k = 1; k <= 3; ++k) CHECK(gf2_rank(boundary_columns(c, k)) == o.boundary_rank(k));
      CHECK(betti_gf2(c) == oracle_betti(d, n, s));
      CHECK(static_cast<std::int64_t>(c.count(0)) - static_cast<std::int64_t>(c.count(1)) +
                static_cast<std::int64_t>(c.count(2)) - static_cast<std::int64_t>(c.count(3)) ==
            o.euler());
      CHECK(betti_gf2(c)[0] == static_cast<std::int64_t>(oracle::components(d, n, s)));
    }
  }
  std::size_t n = 0;
  const auto ico = icosphere_points(1, &n);
  CHECK(n == 42);
  for (double s = 0.25; s <= 1.0; s += 0.25) CHECK(betti_gf2(rips_skeleton(ico, n, s)) == oracle_betti(ico, n, s));
}

TEST_CASE("gf2 rank") {
  CHECK(gf2_rank({}) == 0);
  CHECK(gf2_rank({{0, 1}, {1, 2}, {0, 2}}) == 2);
  CHECK(gf2_rank({{3}, {3}, {}}) == 1);
  Sampler rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<std::uint32_t>> cols;
    std::vector<std::bitset<64>> rows;
    for (int c = 0; c < 30; ++c) {
      std::vector<std::uint32_t> col;
      std::bitset<64> r;
      for (std::uint32_t i = 0; i < 40; ++i)
        if (rng.below(5) == 0) {
          col.push_back(i);
          r.set(i);
        }
      cols.push_back(col);
      rows.push_back(r);
    }
    CHECK(gf2_rank(cols) == oracle::bitset_rank(rows));
  }
}

TEST_CASE("loop filling") {
  const std::size_t n = 12;
  const auto d = circle_points(n);
  std::vector<std::size_t> loop(n);
  std::iota(loop.begin(), loop.end(), 0);
  const double step = d[1] * 1.001;
  CHECK_FALSE(loop_filling_check(d, n, loop, step).fillable);
  CHECK(loop_filling_check(d, n, loop, 2.5).fillable);
  CHECK(loop_filling_check(d, n, {0, 1, 2, 1}, step).fillable);
  CHECK_THROWS(loop_filling_check(d, n, {0, 6}, step));
  const auto oct = octahedron();
  CHECK(loop_filling_check(oct, 6, {0, 2, 1, 3}, 1.5).fillable);
}

TEST_CASE("plateaus on calibration samples") {
  std::size_t n = 0;
  const auto ico = icosphere_points(1, &n);
  const auto p = betti_profile(ico, n, parse_scale_grid("0.1:2.1:0.1"));
  REQUIRE(p.plateau);
  CHECK(*p.plateau == Betti{1, 0, 1});
  // every plateau scale is checked against the dense oracle (which caps the
  // number of faces it can hold)
  for (std::size_t i = 0; i < p.scales.size(); ++i) {
    const oracle::CliqueOracle o(ico, n, p.scales[i]);
    const bool fits = o.simplices[1].size() <= 4096 && o.simplices[2].size() <= 4096;
    const bool on_plateau = p.scales[i] >= p.plateau_from && p.scales[i] <= p.plateau_to;
    if (on_plateau) REQUIRE(fits);
    if (fits && !p.over_budget[i]) {
      const auto b = o.betti();
      CHECK(p.betti[i] == Betti{b[0], b[1], b[2]});
    }
  }

  const auto circle = circle_points(24);
  std::vector<double> grid;
  for (double s = 0.1; s <= 2.05; s += 0.05) grid.push_back(s);
  const auto pc = betti_profile(circle, 24, grid);
  REQUIRE(pc.plateau);
  CHECK(*pc.plateau == Betti{1, 1, 0});

  const auto iso = betti_profile(isolated_points(7), 7, parse_scale_grid("0.25:0.75:0.25"));
  REQUIRE(iso.plateau);
  CHECK(*iso.plateau == Betti{7, 0, 0});
}

TEST_CASE("subsampling and scale grids") {
  const auto d = random_cloud(60, 3);
  const auto s = farthest_point_sample(d, 60, 20, 9);
  CHECK(s.size() == 20);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  CHECK(s == farthest_point_sample(d, 60, 20, 9));
  CHECK(farthest_point_sample(d, 60, 100, 1).size() == 60);

  const auto prof = betti_profile(d, 60, {0.3, 0.6}, 20, 9);
  CHECK(prof.points == 20);
  CHECK(prof.original_points == 60);

  const auto g = parse_scale_grid("0.5:1.5:0.25");
  CHECK(g.size() == 5);
  CHECK(g.back() == doctest::Approx(1.5));
  CHECK(parse_scale_grid("3, 1,2") == std::vector<double>{1, 2, 3});
  CHECK_THROWS(parse_scale_grid("2:1:0.5"));
  CHECK_THROWS(betti_profile(d, 60, {0.6, 0.3}));
}

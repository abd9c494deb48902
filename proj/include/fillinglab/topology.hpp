#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fillinglab {

// Clique complex of {d <= scale}, simplices of dimension <= max_dim stored
// as sorted vertex tuples, lexicographically ordered per dimension.
struct RipsComplex {
  double scale = 0;
  std::size_t points = 0;
  int max_dim = 3;
  std::vector<std::vector<std::uint32_t>> simplices;  // simplices[k]: flat, k+1 entries each

  std::size_t count(int k) const {
    return k < static_cast<int>(simplices.size()) ? simplices[k].size() / static_cast<std::size_t>(k + 1) : 0;
  }
  std::size_t total() const;
};

RipsComplex rips_skeleton(const std::vector<double>& d, std::size_t n, double scale, int max_dim = 3,
                          std::size_t simplex_budget = 3000000);

// Boundary matrix of dimension k (rows: (k-1)-simplices), as sorted row lists per column.
std::vector<std::vector<std::uint32_t>> boundary_columns(const RipsComplex& c, int k);
// GF(2) rank by column reduction with a pivot table.
std::size_t gf2_rank(std::vector<std::vector<std::uint32_t>> columns);

using Betti = std::array<std::int64_t, 3>;
Betti betti_gf2(const RipsComplex& c);
std::string format_betti(const Betti& b);

struct BettiProfile {
  std::vector<double> scales;
  std::vector<Betti> betti;
  std::vector<std::size_t> simplices;
  std::vector<char> over_budget;  // scale skipped
  std::size_t points = 0;          // after subsampling
  std::size_t original_points = 0;
  std::uint64_t seed = 0;
  std::optional<Betti> plateau;
  double plateau_from = 0, plateau_to = 0;
  std::size_t plateau_length = 0;
};

// Max-min subsample of `keep` points; the first point is drawn with the seed.
std::vector<std::size_t> farthest_point_sample(const std::vector<double>& d, std::size_t n, std::size_t keep,
                                               std::uint64_t seed);

// Per-scale Betti numbers; the plateau is the longest run of equal triples
// among scales that are neither discrete (no edges) nor past the diameter.
BettiProfile betti_profile(const std::vector<double>& d, std::size_t n, const std::vector<double>& scales,
                           std::size_t max_points = 80, std::uint64_t seed = 1,
                           std::size_t simplex_budget = 3000000);
std::vector<double> parse_scale_grid(const std::string& text);  // "a:b:step" or "s1,s2,..."

struct LoopFilling {
  bool fillable = false;  // the loop is zero in H_1(Rips; Z/2)
  std::string proxy = "homological";
  std::size_t edges = 0;
};
// Throws when consecutive loop points are farther apart than the scale.
LoopFilling loop_filling_check(const std::vector<double>& d, std::size_t n, const std::vector<std::size_t>& loop,
                               double scale);

// Synthetic samples (Euclidean distance tables).
std::vector<double> icosphere_points(int subdivisions, std::size_t* n);  // 12, 42, 162, ...
std::vector<double> circle_points(std::size_t n);
std::vector<double> isolated_points(std::size_t m);  // all distances 1
std::vector<double> euclidean_table(const std::vector<std::array<double, 3>>& pts);

}  // namespace fillinglab

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fillinglab/cusped.hpp"
#include "fillinglab/quotient.hpp"

namespace fillinglab {

// Sphere S_R(w) of a ball with the visual quasimetric e^{-eps (x|y)_w}.
// Gromov products are kept exactly as twice-products in model units.
struct BoundaryApprox {
  std::string source;
  int basepoint = 0;        // ball index of w
  std::int64_t radius = 0;  // in edges (model units / unit for weighted balls)
  double epsilon = 0;
  std::int64_t unit = 1;
  std::vector<int> ball_index;
  std::vector<std::string> labels;
  std::vector<CuspedVertex> vertices;     // empty for synthetic graphs
  std::vector<std::int64_t> product2;     // 2 (x|y)_w * unit, row-major
  std::uint64_t uncertified = 0;          // pairs whose ball distance is only an upper bound
  std::vector<int> marking;               // -1 or index into components
  std::vector<std::string> components;
  double density_delta = 0;               // Δ of the density surrogate

  std::size_t size() const { return ball_index.size(); }
  Rational gromov(std::size_t i, std::size_t j) const { return {product2[i * size() + j], 2 * unit}; }
  // Diagonal is 0 by convention.
  double rho(std::size_t i, std::size_t j) const;
  std::vector<double> rho_table() const;
};

BoundaryApprox sphere_approx(const BallSnapshot& ball, std::int64_t radius, double epsilon, int basepoint = -1);

// eps = 1 / (6 max(delta, 1/2)) for a measured thin-triangle constant.
double auto_epsilon(Rational delta);

struct ChainMetric {
  std::size_t n = 0;
  std::vector<double> table;
  double kappa_hat = 1;  // max rho / rho_hat over distinct pairs
  bool triangle_ok = true;
  std::size_t passes = 0;

  double operator()(std::size_t i, std::size_t j) const { return table[i * n + j]; }
};

// Largest metric below rho: shortest chain sums, iterated until no entry
// improves so that the triangle inequality holds in the computed arithmetic.
ChainMetric chain_metric(const std::vector<double>& rho, std::size_t n);
ChainMetric chain_metric(const BoundaryApprox& a);
bool satisfies_triangle(const std::vector<double>& d, std::size_t n);

struct ChainReport {
  double L = 1;  // +inf when some pair has no chain
  bool disconnected = false;
  std::uint64_t pairs = 0;
  std::uint64_t below_floor = 0;
  double floor = 0;
  std::size_t worst_p = 0, worst_q = 0;
  std::vector<std::size_t> worst_chain;
  std::vector<std::vector<std::size_t>> witnesses;  // one chain per tested pair (capped)
};

// For every pair with d(p,q) >= 2 floor: a chain p..q with steps <= d(p,q)/2
// and small diameter; L is the largest diameter/d(p,q). floor < 0 selects the
// mesh (largest nearest-neighbor distance).
ChainReport linear_connectedness(const std::vector<double>& d, std::size_t n, double floor = -1,
                                 std::size_t witness_cap = 64);
double chain_diameter(const std::vector<double>& d, std::size_t n, const std::vector<std::size_t>& chain);

// Tags sphere points lying on the bottom horosphere of a truncated horoball
// (level = cap >= 1) by their center; also fills the density surrogate.
void mark_peripheral(BoundaryApprox& a, const BallSnapshot& ball, const CuspedSpace& space);

struct StrongConvergenceReport {
  bool isometric = true;
  std::int64_t radius = 0;
  std::size_t vertices = 0;
  std::string failure;
  std::vector<CuspedVertex> witness;
};

// Is the projection B_R(p) of `a` -> B_R(p') of `b` a bijective isometry?
// Both balls need radius >= 2R about their basepoints.
StrongConvergenceReport strong_convergence_check(const QuotientBall& a, const QuotientBall& b, std::int64_t radius);

struct GHOptions {
  double lambda = 1.0;
  std::uint64_t seed = 1;
  std::size_t sweeps = 8;
  std::size_t candidates = 12;  // per point and sweep: nearest images plus random
  std::vector<int> initial;     // optional starting map A -> B (-1 entries are filled greedily)
};

struct GHReport {
  double lambda = 1;
  double epsilon = 0;      // achieved by `map`
  double distortion = 0;   // pair term
  double coverage = 0;     // sup_b d(b, f(A))
  double lower_bound = 0;  // certified
  std::string lower_bound_reason;
  std::vector<int> map;
  std::uint64_t seed = 0;
  std::size_t improvements = 0;
};

// Additive defect of f: A -> B as a (lambda, eps)-quasi-isometry.
double qi_defect(const std::vector<double>& a, std::size_t na, const std::vector<double>& b, std::size_t nb,
                 const std::vector<int>& f, double lambda, double* distortion = nullptr, double* coverage = nullptr);
GHReport weak_gh_estimate(const std::vector<double>& a, std::size_t na, const std::vector<double>& b, std::size_t nb,
                          const GHOptions& opt = {});
double gh_lower_bound(const std::vector<double>& a, std::size_t na, const std::vector<double>& b, std::size_t nb,
                      double lambda, std::string* reason = nullptr);

// Initial map from sphere A to sphere B through the quotient projection
// (entries whose image is not a point of B are -1).
std::vector<int> provenance_map(const BoundaryApprox& a, const BoundaryApprox& b,
                                const std::function<CuspedVertex(const CuspedVertex&)>& project);

struct ProjectionDistortion {
  double additive = 0;        // max |rho_R(pi x, pi y) - rho_R'(x, y)|
  double multiplicative = 1;  // over pairs with pi x != pi y
  std::size_t points = 0;
};
// Sphere S_R' projected to S_R along canonical geodesics from the basepoint.
ProjectionDistortion projection_distortion(const BallSnapshot& ball, std::int64_t r, std::int64_t r_outer,
                                           double epsilon);

}  // namespace fillinglab

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fillinglab/cusped.hpp"
#include "fillinglab/util.hpp"

namespace fillinglab {

struct SamplePolicy {
  enum class Mode { Auto, Exhaustive, Sampled };
  Mode mode = Mode::Auto;
  std::size_t exhaustive_threshold = 400;  // vertices
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  // Quadruple/triangle points are drawn from here (all vertices when empty).
  std::vector<int> subset;
  // If nonempty, the first point ranges only over these vertices; exact when
  // every vertex is carried onto one of them by an automorphism of the
  // tested configuration.
  std::vector<int> anchors;
  bool use_certificates = true;
};

struct HyperbolicityReport {
  Rational theta_4pt{0};
  Rational delta_thin{0};
  std::string policy;  // "exhaustive", "sampled", "certificate:block-graph", "certificate:tree", ...
  std::uint64_t seed = 0;
  std::uint64_t tested = 0;
  bool exhaustive = false;
  std::vector<int> witness;
};

// Smallest θ with Q(θ) over tested certified quadruples.
HyperbolicityReport four_point_delta(const BallSnapshot& ball, const SamplePolicy& policy = {});
// Largest comparison-tripod fiber diameter over tested certified triangles
// (one canonical geodesic per side).
HyperbolicityReport thin_triangle_delta(const BallSnapshot& ball, const SamplePolicy& policy = {});

// 4-point θ of an explicit finite metric (row-major n x n table).
Rational four_point_theta_table(const std::vector<std::int32_t>& table, std::size_t n,
                                const std::vector<int>& anchors = {}, std::vector<int>* witness = nullptr);

Rational gromov_product(const BallSnapshot& ball, int x, int y, int p);

// Every biconnected block is a clique (exactly the graphs with θ = 0).
bool is_block_graph(const BallSnapshot& ball);
bool is_tree(const BallSnapshot& ball);

// Max over certified pairs of S and their canonical geodesics of d(v, S).
Rational quasiconvexity_defect(const BallSnapshot& ball, const std::vector<int>& subset);
// Multi-source distances to a vertex set inside the ball.
std::vector<std::int32_t> distance_to_set(const BallSnapshot& ball, const std::vector<int>& set);

struct VisibilityReport {
  Rational defect{0};
  int worst = -1;
  std::uint64_t tested = 0;
};
// From the ball center a: the largest distance from a point b with
// d(a,b) <= R - margin to the union of geodesics from a to S_{R-margin}(a).
VisibilityReport visibility_defect(const BallSnapshot& ball, std::int64_t margin);

struct TightPathReport {
  bool precondition_ok = false;
  std::string failure;  // which condition failed and where
  Rational hausdorff{0};
  std::int64_t local_window = 0;
};
// Checks the path is (6C+8δ+1)-locally C-tight, then measures the Hausdorff
// distance to the canonical geodesic between its endpoints.
TightPathReport tight_path_hausdorff(const BallSnapshot& ball, const std::vector<int>& path, std::int64_t C,
                                     Rational delta);

}  // namespace fillinglab

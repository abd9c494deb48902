#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fillinglab/cusped.hpp"
#include "fillinglab/hyperbolicity.hpp"
#include "fillinglab/util.hpp"

namespace fillinglab {

struct TruncationOptions {
  // Radius of the Γ-ball (word metric) whose quadruples are tested; ignored
  // for finite Γ, which is tested whole.
  std::int64_t certify_radius = 32;
  // Q(slack_bound/2): the 4-point slack (S1 - S2) allowed; Q(5) means 10.
  std::int64_t slack_bound = 10;
  std::size_t exhaustive_cap = 2000;  // points; sampled above
  std::uint64_t samples = 2000000;
  std::uint64_t seed = 1;
  std::int64_t max_depth = 40;
};

struct TruncationInfo {
  std::string graph;                    // e.g. "Z/8", "Z/(a=-8b)"
  std::int64_t t = 0;
  std::int64_t certification_radius = -1;  // -1: the whole finite graph
  std::size_t points = 0;
  std::vector<Rational> theta_by_depth;  // depth 0..t
  std::string policy;                    // exhaustive | sampled
  bool failure_witnessed = true;         // Q(5) fails at t-1 on the tested set (vacuous for t = 0)
  double log2_theta = 0;                 // log2 of θ at depth 0, a rough scale for t
};

// θ of the depth-k horosphere metric ⌈d/2^k⌉ on the tested Γ-points, with
// one point fixed at the identity (Γ acts transitively).
Rational horosphere_theta(const AbelianFactor& gamma, std::int64_t k, const TruncationOptions& opt,
                          std::string* policy = nullptr, std::size_t* points = nullptr);

TruncationInfo truncation_depth(const AbelianFactor& gamma, const TruncationOptions& opt = {});

// Horoball over Γ alone (Γ relative to itself) with levels in [a, t].
CuspedSpace horoball_space(const AbelianFactor& gamma, std::int64_t a, std::int64_t t,
                           const HoroballModel& model = {});
CuspedVertex horoball_point(const CuspedSpace& space, const IntVec& m, std::int64_t level);

BallSnapshot truncated_ball(const AbelianFactor& gamma, std::int64_t a, std::int64_t t, std::int64_t radius);

struct GeodesicShape {
  std::int64_t down = 0;        // first vertical segment (signed: + means deeper)
  std::int64_t horizontal = 0;  // number of horizontal edges
  std::int64_t level = 0;       // level of the horizontal segment
  std::int64_t up = 0;          // second vertical segment (signed)
  std::int64_t length = 0;
  std::vector<CuspedVertex> path;
};

// A geodesic made of at most two vertical segments and one horizontal
// segment between (m1,n1) and (m2,n2) in the window [a, t].
GeodesicShape geodesic_shape(const CuspedSpace& horoball, const IntVec& m1, std::int64_t n1, const IntVec& m2,
                             std::int64_t n2);

struct VisibilityCheck {
  Rational worst_defect{0};
  std::uint64_t pairs = 0;
  std::vector<CuspedVertex> worst_pair;
};

// For p,q in H^{[a,t]} with d(p,q) = lambda, the smallest D such that a
// geodesic of length 2*lambda from p inside H^{[a-lambda,t]} passes within D
// of q; the worst D over the tested pairs.
VisibilityCheck local_visibility_check(const AbelianFactor& gamma, std::int64_t t, std::int64_t a,
                                       std::int64_t lambda, std::uint64_t samples, std::uint64_t seed);

}  // namespace fillinglab

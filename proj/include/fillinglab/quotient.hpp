#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fillinglab/cusped.hpp"
#include "fillinglab/group.hpp"
#include "fillinglab/truncation.hpp"

namespace fillinglab {

// A filling together with the truncation depth of every peripheral quotient.
class QuotientContext {
 public:
  QuotientContext(GroupContext base, FillingSpec spec, const TruncationOptions& topt = {});

  const Filling& filling() const { return filling_; }
  const GroupContext& base() const { return filling_.base(); }
  const GroupContext& quotient() const { return filling_.quotient(); }

  // t_c for horoballs over peripheral factor i.
  std::int64_t t(int i) const;
  const TruncationInfo& truncation(int i) const;
  bool finite_peripheral(int i) const { return quotient().factor(i).is_finite(); }
  bool any_finite_peripheral() const;

  // Kernel elements of N_i with coefficients in [-bound, bound] on the
  // kernel generators, nonzero and deduplicated, sorted by word length.
  std::vector<IntVec> small_kernel_elements(int i, std::int64_t bound) const;

 private:
  Filling filling_;
  std::vector<std::optional<TruncationInfo>> trunc_;
};

// Left K_W-orbit canonicalization, K_W the free product of the stabilizer
// kernels K_c = h N_i h^-1 of the listed centers (h P_i).
class OrbitCanonicalizer {
 public:
  OrbitCanonicalizer(const Filling& filling, std::vector<Center> reps);

  const std::vector<Center>& reps() const { return reps_; }
  GroupElement element(const GroupElement& g) const;
  CuspedVertex vertex(const CuspedVertex& v) const;
  Center center(const Center& c) const;
  // c lies in the K_W-orbit of a listed center.
  bool covers(const Center& c) const;
  // The conjugated kernel generators h v h^-1, one list per rep.
  std::vector<std::vector<GroupElement>> factor_generators() const;

 private:
  std::shared_ptr<const Filling> filling_;
  std::vector<Center> reps_;
  std::set<Center> canon_reps_;
};

struct QuotientBall {
  std::string kind;  // "X/K", "T_G", "X/K_W", "T_W"
  std::shared_ptr<CuspedSpace> space;
  BallSnapshot ball;
  // Base-space vertex to its quotient vertex.
  std::function<CuspedVertex(const CuspedVertex&)> project;
  bool finite_horoballs = false;  // some peripheral quotient is finite
};

// Cusped space of the quotient pair, optionally truncated at t_c.
std::shared_ptr<CuspedSpace> quotient_space(const QuotientContext& q, bool truncate);
QuotientBall quotient_cusped_ball(const QuotientContext& q, std::int64_t radius, bool truncate);

// Base cusped space modulo K_W; with truncate, horoballs in the orbit of a
// listed center are cut at their t_c.
std::shared_ptr<CuspedSpace> partial_quotient_space(const QuotientContext& q, std::shared_ptr<const OrbitCanonicalizer> canon,
                                                    bool truncate);
QuotientBall partial_quotient_ball(const QuotientContext& q, const std::vector<Center>& reps, std::int64_t radius,
                                   bool truncate);

// Vertex of X (or X/K_W) to its image in X/K.
CuspedVertex project_vertex(const Filling& f, const CuspedVertex& v);

struct EmbeddingReport {
  bool isometric = true;
  std::int64_t radius = 0;
  std::uint64_t pairs = 0;
  std::vector<CuspedVertex> witness;  // base pair whose distance changes
  std::int64_t base_distance = 0;
  std::int64_t quotient_distance = 0;
};
// Does B_R(1) of X map isometrically into X/K?
EmbeddingReport ball_embedding_check(const QuotientContext& q, std::int64_t radius);

struct GreendlingerStep {
  Center center;
  GroupElement k;
  std::int64_t before = 0;
  std::int64_t after = 0;
};

// One shortening step for g in K at basepoint b (the Cayley vertex of b).
std::optional<GreendlingerStep> greendlinger_shorten(const QuotientContext& q, const GroupElement& g,
                                                     const GroupElement& basepoint, std::int64_t depth,
                                                     std::int64_t kernel_bound = 2);

struct GreendlingerRun {
  GroupElement start;
  std::vector<GreendlingerStep> steps;
  bool terminated = false;         // reached the identity
  bool strictly_decreasing = true;
  std::string failure;
};
GreendlingerRun greendlinger_loop(const QuotientContext& q, const GroupElement& g, const GroupElement& basepoint,
                                  std::int64_t depth, std::size_t max_steps = 64);

struct VeryTranslatingReport {
  Rational worst_ratio{0};
  bool pass = false;
  std::int64_t multiplier = 0;
  std::int64_t a_depth = 0;
  std::uint64_t samples = 0;
  CuspedVertex worst_x;
  GroupElement worst_g;
  std::int64_t worst_distance = 0;
};
// min d(x, gx) / theta over g in small K_c \ {1} (c the peripheral
// horoballs at 1) and x within `sample_radius` of 1 outside depth >= a_depth.
VeryTranslatingReport very_translating_check(const QuotientContext& q, Rational theta, std::int64_t multiplier,
                                             std::int64_t a_depth, std::int64_t sample_radius,
                                             std::int64_t kernel_bound = 2);

}  // namespace fillinglab

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fillinglab/group.hpp"

namespace fillinglab {

inline constexpr std::int64_t kNoCap = std::numeric_limits<std::int64_t>::max();

enum class ModelKind { Combinatorial, Scaled, CannonCooper, Warped };

// Horoball model. Combinatorial and Scaled join (v,k) to (w,k) when
// 0 < d(v,w) <= lambda^k. CannonCooper and Warped use generator steps with
// length lambda^-k, discretized to integer multiples of 1/denominator; Warped
// additionally uses half-depth levels.
struct HoroballModel {
  ModelKind kind = ModelKind::Combinatorial;
  double lambda = 2.0;
  std::int64_t denominator = 1024;

  // "comb2", "comb:3", "scaled:3", "cc:2", "cc:e", "warped:2".
  static HoroballModel parse(const std::string& text);
  std::string name() const;
  bool weighted() const { return kind == ModelKind::CannonCooper || kind == ModelKind::Warped; }
  std::int64_t unit() const { return weighted() ? denominator : 1; }
  std::int64_t reach(std::int64_t level) const;
  std::int64_t vertical_weight() const;
  std::int64_t horizontal_weight(std::int64_t level) const;
  // Depth in the continuous sense (level for all but Warped, level/2 there).
  double depth_of_level(std::int64_t level) const;
  std::int64_t levels_per_depth() const { return kind == ModelKind::Warped ? 2 : 1; }
};

struct CuspedVertex {
  GroupElement g;
  int periph = -1;         // -1 for a Cayley vertex
  std::int64_t depth = 0;  // horoball level, 0 for Cayley vertices

  bool is_cayley() const { return periph < 0; }
  friend bool operator==(const CuspedVertex&, const CuspedVertex&) = default;
  std::size_t hash() const { return g.hash() * 31 + static_cast<std::size_t>(periph + 1) * 1000003u + depth; }
};

struct CuspedVertexHash {
  std::size_t operator()(const CuspedVertex& v) const noexcept { return v.hash(); }
};

template <class T>
using VertexMap = std::unordered_map<CuspedVertex, T, CuspedVertexHash>;

// Horoball center: the coset label of gP_i.
struct Center {
  GroupElement label;
  int periph = 0;
  friend bool operator==(const Center&, const Center&) = default;
  friend bool operator<(const Center& a, const Center& b) {
    if (a.periph != b.periph) return a.periph < b.periph;
    return a.label < b.label;
  }
};

// The combinatorial cusped space of a GroupContext as an implicit graph,
// optionally with depth caps (truncation), a depth floor (horoball windows)
// and an orbit canonicalizer (partial quotients).
class CuspedSpace {
 public:
  using Canonicalizer = std::function<CuspedVertex(const CuspedVertex&)>;
  using DepthCap = std::function<std::int64_t(const Center&)>;

  CuspedSpace() = default;
  explicit CuspedSpace(GroupContext ctx, HoroballModel model = {});

  const GroupContext& context() const { return ctx_; }
  const HoroballModel& model() const { return model_; }

  // Largest allowed level in peripheral-i horoballs (0 removes them).
  void set_depth_cap(int peripheral, std::int64_t max_level);
  void set_depth_cap_fn(DepthCap cap) { cap_fn_ = std::move(cap); }
  // Vertices above this level (and the Cayley graph when > 0) are removed.
  void set_min_level(std::int64_t level) { min_level_ = level; }
  std::int64_t min_level() const { return min_level_; }
  void set_canonicalizer(Canonicalizer c) { canon_ = std::move(c); }
  bool has_canonicalizer() const { return static_cast<bool>(canon_); }

  std::int64_t depth_cap(const Center& c) const;
  bool contains(const CuspedVertex& v) const;
  CuspedVertex canonical(const CuspedVertex& v) const { return canon_ ? canon_(v) : v; }

  CuspedVertex cayley(const GroupElement& g) const { return canonical({g, -1, 0}); }
  CuspedVertex horoball_vertex(const GroupElement& g, int i, std::int64_t level) const;
  Center center_of(const CuspedVertex& v) const;

  // Neighbors with edge weights (in model units), deduplicated, self-loops
  // removed, deterministic order.
  std::vector<std::pair<CuspedVertex, std::int64_t>> neighbors(const CuspedVertex& v) const;

  std::string format(const CuspedVertex& v) const;
  std::string format(const Center& c) const;

 private:
  GroupContext ctx_;
  HoroballModel model_;
  std::vector<std::int64_t> caps_;
  DepthCap cap_fn_;
  std::int64_t min_level_ = 0;
  Canonicalizer canon_;
};

// A finite ball (or any finite graph) with an on-demand exact distance table.
class BallSnapshot {
 public:
  static BallSnapshot build(const CuspedSpace& space, const CuspedVertex& center, std::int64_t radius);
  // Synthetic graph; the ball radius is the eccentricity of `center`. With
  // ball_radius >= 0 the graph is treated as a ball of that radius cut out
  // of a larger space (distances certified by the margin rule only).
  static BallSnapshot from_edges(std::size_t n, const std::vector<std::pair<int, int>>& edges, int center = 0,
                                 std::vector<std::string> labels = {}, std::int64_t ball_radius = -1);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  std::int64_t radius() const { return radius_; }
  std::int64_t unit() const { return unit_; }
  bool weighted() const { return !weights_.empty(); }
  int center() const { return center_; }
  const std::string& model_name() const { return model_name_; }

  bool has_vertices() const { return !vertices_.empty(); }
  const CuspedVertex& vertex(int i) const { return vertices_.at(i); }
  const std::vector<CuspedVertex>& vertices() const { return vertices_; }
  std::optional<int> index_of(const CuspedVertex& v) const;
  const std::string& label(int i) const { return labels_.at(i); }
  std::int64_t level(int i) const { return levels_.empty() ? 0 : levels_[i]; }
  int periph(int i) const { return periphs_.empty() ? -1 : periphs_[i]; }

  std::int64_t center_distance(int i) const { return center_dist_[i]; }
  std::span<const int> neighbors(int i) const {
    return {targets_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::int64_t edge_weight(std::size_t edge_slot) const { return weights_.empty() ? 1 : weights_[edge_slot]; }
  std::size_t edge_offset(int i) const { return offsets_[i]; }
  std::vector<std::pair<int, int>> edge_list() const;

  // Distances in the graph induced on the ball. Rows are cached up to the
  // table budget; the returned handle stays valid after eviction.
  using Row = std::shared_ptr<const std::vector<std::int32_t>>;
  Row row(int i) const;
  std::int64_t dist(int i, int j) const { return (*row(i))[j]; }
  // Dense n x n table (throws past the table budget).
  std::vector<std::int32_t> full_table() const;
  // True when the ball is a whole connected component of the space, so every
  // ball distance is exact.
  bool complete() const { return complete_; }
  // The pair's ball distance is the distance of the whole space: every path
  // of length d(i,j) stays within max(|i|,|j|) + d(i,j)/2 of the center.
  bool certified(int i, int j) const;

  std::vector<int> canonical_geodesic(int from, int to) const;

  // Subgraph induced on `keep` (order preserved), with new center index.
  BallSnapshot induced(const std::vector<int>& keep, int new_center) const;

  static constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max() / 4;

 private:
  void finalize(std::vector<std::vector<std::pair<int, std::int64_t>>>& adj);

  std::vector<CuspedVertex> vertices_;
  std::vector<std::string> labels_;
  std::vector<std::int64_t> levels_;
  std::vector<int> periphs_;
  VertexMap<int> index_;
  std::vector<std::int64_t> center_dist_;
  std::vector<std::size_t> offsets_;
  std::vector<int> targets_;
  std::vector<std::int64_t> weights_;
  std::int64_t radius_ = 0;
  std::int64_t unit_ = 1;
  int center_ = 0;
  bool complete_ = false;
  std::string model_name_ = "comb2";

  struct RowCache {
    std::mutex mutex;
    std::unordered_map<int, Row> rows;
    std::size_t entries = 0;
  };
  std::shared_ptr<RowCache> cache_ = std::make_shared<RowCache>();
};

// Single-source search in the implicit space up to `radius` (model units).
VertexMap<std::int64_t> implicit_ball(const CuspedSpace& space, const CuspedVertex& source, std::int64_t radius);
// Exact distance by bidirectional search (unweighted models); nullopt if > cap.
std::optional<std::int64_t> implicit_distance(const CuspedSpace& space, const CuspedVertex& a, const CuspedVertex& b,
                                              std::int64_t cap);
// A geodesic (vertex sequence) by recursive midpoint search; deterministic.
std::vector<CuspedVertex> implicit_geodesic(const CuspedSpace& space, const CuspedVertex& a, const CuspedVertex& b,
                                            std::int64_t cap);

// ⌈d / 2^n⌉ for d the peripheral word distance of u and w.
std::int64_t horosphere_distance(const AbelianFactor& p, const IntVec& u, const IntVec& w, std::int64_t n);

}  // namespace fillinglab

namespace fillinglab {
struct ModelDistortion {
  double multiplicative = 1;  // over pairs at distance >= min_distance on both sides
  double additive = 0;        // with that multiplicative constant, over all pairs
  std::uint64_t pairs = 0;
  std::size_t matched = 0;    // vertices of A whose image lies in B
};
// Compares balls of two horoball models over the same group under
// (g, depth n) -> (g, n ln(lambda_A) / ln(lambda_B)), rounded to a level of B.
// Only pairs certified in both balls count; above `pair_cap` pairs a seeded
// sample is used.
ModelDistortion model_distortion(const BallSnapshot& a, const HoroballModel& ma, const BallSnapshot& b,
                                 const HoroballModel& mb, double min_distance = 4, std::uint64_t pair_cap = 2000000,
                                 std::uint64_t seed = 1);

// Same quantity for two horoball vertices; throws when they lie on different
// horospheres (different centers or levels).
std::int64_t horosphere_distance(const CuspedSpace& space, const CuspedVertex& u, const CuspedVertex& w);
}  // namespace fillinglab

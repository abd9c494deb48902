#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace fillinglab {

using IntVec = std::vector<std::int64_t>;

// A finitely generated abelian group presented as Z^n / L, where the n
// generators are the standard basis vectors and L is spanned by
// `relations`. Elements are stored in canonical coordinates obtained from a
// Smith normal form of the relation lattice: one coordinate per nontrivial
// invariant factor (reduced into [0, d)) followed by the free coordinates.
//
// The word metric is always taken with respect to the images of the
// standard basis vectors, so a quotient keeps the generating set of the
// group it came from.
class AbelianFactor {
 public:
  AbelianFactor() = default;
  AbelianFactor(int num_generators, std::vector<IntVec> relations);

  // "Z", "Z^2", "Z/6", "Z/6+Z", "Z^2+Z/3", "1".
  static AbelianFactor parse(const std::string& text);

  int num_generators() const { return num_generators_; }
  const std::vector<IntVec>& relations() const { return relations_; }

  // Invariant factors > 1, in divisibility order.
  const std::vector<std::int64_t>& torsion() const { return torsion_; }
  int free_rank() const { return free_rank_; }
  bool is_trivial() const { return torsion_.empty() && free_rank_ == 0; }
  bool is_finite() const { return free_rank_ == 0; }
  // Order of a finite factor; 0 when infinite.
  std::int64_t order() const;
  std::size_t coord_dim() const { return torsion_.size() + free_rank_; }

  IntVec reduce(std::span<const std::int64_t> raw) const;
  IntVec lift(std::span<const std::int64_t> canon) const;
  IntVec zero() const { return IntVec(coord_dim(), 0); }
  IntVec add(const IntVec& a, const IntVec& b) const;
  IntVec negate(const IntVec& a) const;
  bool is_zero(const IntVec& a) const;
  // Image of (sign) * e_j.
  IntVec generator(int j, int sign = 1) const;

  // Word length with respect to the standard generators.
  std::int64_t word_length(const IntVec& canon) const;
  std::int64_t distance(const IntVec& a, const IntVec& b) const {
    return word_length(add(negate(a), b));
  }

  // Elements of word length exactly r, sorted by coordinates. The span
  // stays valid for the lifetime of the factor.
  std::span<const IntVec> sphere(std::int64_t r) const;
  // All elements of word length <= radius, ordered by (length, coords).
  std::vector<IntVec> ball(std::int64_t radius) const;
  // Largest word length of an element; -1 for infinite factors.
  std::int64_t diameter() const;

  // Z^n / (L + span(kernel)).
  AbelianFactor quotient(const std::vector<IntVec>& kernel) const;

  std::string describe() const;

 private:
  struct MetricCache {
    std::mutex mutex;
    std::deque<std::vector<IntVec>> layers;
    std::map<IntVec, std::int64_t> index;
    bool exhausted = false;
  };

  void compute_normal_form();
  void grow_to(MetricCache& cache, std::int64_t radius) const;
  std::int64_t lattice_l1_min(const IntVec& raw) const;

  int num_generators_ = 0;
  std::vector<IntVec> relations_;
  std::vector<std::int64_t> diagonal_;  // full diagonal of the Smith form (length n)
  std::vector<std::int64_t> torsion_;
  int free_rank_ = 0;
  int lattice_rank_ = 0;
  std::vector<IntVec> u_;      // n x n, canonical = U * raw
  std::vector<IntVec> u_inv_;  // n x n
  IntVec rank_one_generator_;  // basis of L when lattice_rank_ == 1
  std::shared_ptr<MetricCache> cache_ = std::make_shared<MetricCache>();
};

}  // namespace fillinglab

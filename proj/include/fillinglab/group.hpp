#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fillinglab/abelian.hpp"

namespace fillinglab {

struct Syllable {
  int factor = 0;
  IntVec value;  // canonical coordinates in the factor, never zero

  friend bool operator==(const Syllable&, const Syllable&) = default;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

// An element of a free product of abelian groups in syllable normal form:
// adjacent syllables lie in distinct factors and none is trivial.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::vector<Syllable> syllables) : syllables_(std::move(syllables)) {}

  const std::vector<Syllable>& syllables() const { return syllables_; }
  std::size_t syllable_length() const { return syllables_.size(); }
  bool is_identity() const { return syllables_.empty(); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  // Shortlex on syllables.
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    if (a.syllables_.size() != b.syllables_.size()) return a.syllables_.size() < b.syllables_.size();
    return a.syllables_ < b.syllables_;
  }

  std::size_t hash() const;

 private:
  std::vector<Syllable> syllables_;
};

// A free product of abelian factors with designated peripheral factors.
class GroupContext {
 public:
  GroupContext() = default;
  GroupContext(std::vector<AbelianFactor> factors, std::vector<int> peripheral,
               std::vector<std::vector<std::string>> generator_names = {});

  const std::vector<AbelianFactor>& factors() const { return factors_; }
  const AbelianFactor& factor(int i) const { return factors_.at(i); }
  const std::vector<int>& peripheral() const { return peripheral_; }
  bool is_peripheral(int i) const;
  const std::vector<std::vector<std::string>>& generator_names() const { return names_; }

  GroupElement identity() const { return {}; }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  // a * s for a single factor element s (possibly zero).
  GroupElement multiply_syllable(const GroupElement& a, int factor, const IntVec& value) const;
  GroupElement from_syllable(int factor, const IntVec& value) const;

  // Parses "x^8 y x^-8 y^-1" (whitespace-separated generator powers).
  GroupElement parse_word(const std::string& word) const;
  GroupElement normal_form(const std::vector<std::pair<std::string, std::int64_t>>& word) const;
  std::string format(const GroupElement& g) const;

  // Standard generators of every factor and their inverses, deduplicated,
  // trivial images dropped. Deterministic order.
  const std::vector<Syllable>& generating_set() const { return gens_; }

  // Label of the left coset gP_i: the normal form with a trailing
  // i-syllable removed.
  GroupElement peripheral_coset_id(const GroupElement& g, int i) const;
  // The P_i-coordinate of g relative to its coset label (zero if none).
  IntVec peripheral_part(const GroupElement& g, int i) const;

  // Sum of factor word lengths of the syllables.
  std::int64_t word_length(const GroupElement& g) const;

  std::string describe() const;

 private:
  void build_generating_set();

  std::vector<AbelianFactor> factors_;
  std::vector<int> peripheral_;
  std::vector<std::vector<std::string>> names_;
  std::vector<Syllable> gens_;
};

enum class QuotientKind { Infinite, VirtuallyCyclic, Finite };
std::string to_string(QuotientKind k);

// Filling kernels N_i, one list of raw generator vectors per peripheral index.
struct FillingSpec {
  std::vector<std::pair<int, std::vector<IntVec>>> kernels;

  const std::vector<IntVec>* kernel(int i) const;
  bool empty() const;
};

// A Dehn filling G -> G(N_1, ..., N_n) inside the free-product family.
class Filling {
 public:
  Filling(GroupContext base, FillingSpec spec);

  const GroupContext& base() const { return base_; }
  const GroupContext& quotient() const { return quotient_; }
  const FillingSpec& spec() const { return spec_; }

  GroupElement project(const GroupElement& g) const;
  IntVec project_factor(int factor, const IntVec& value) const;
  bool kernel_contains(const GroupElement& g) const;
  QuotientKind kind(int peripheral_index) const;

  // Canonical lift of p mod N_i inside P_i (deterministic coset representative).
  IntVec reduce_mod_kernel(int factor, const IntVec& value) const;

  // Shortest nontrivial kernel element, in the peripheral word metric;
  // nullopt means no kernel element is nontrivial (infinite girth).
  std::optional<std::int64_t> girth() const;
  std::optional<std::int64_t> girth(int peripheral_index) const;

  // Generators of N_i as canonical elements of the base factor (nonzero only).
  std::vector<IntVec> kernel_generators(int factor) const;

 private:
  GroupContext base_;
  GroupContext quotient_;
  FillingSpec spec_;
};

GroupContext quotient_context(const GroupContext& ctx, const FillingSpec& spec);

}  // namespace fillinglab

template <>
struct std::hash<fillinglab::GroupElement> {
  std::size_t operator()(const fillinglab::GroupElement& g) const noexcept { return g.hash(); }
};

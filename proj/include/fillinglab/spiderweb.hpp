#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fillinglab/quotient.hpp"

namespace fillinglab {

// Distances used by the spiderweb construction, in edges. The paper profile
// multiplies theta; the desk profile uses small fixed values so that the
// construction is visible inside radius <= 10 balls.
struct Profile {
  std::string name = "desk";
  Rational theta{1};
  std::int64_t qc = 2;              // 4θ: S1 threshold
  std::int64_t grow = 1;            // 10θ: N(W) in the enlargement
  std::int64_t s2 = 1;              // 50θ: S2 neighborhood
  std::int64_t scan = 2;            // 100θ: new-horoball scan
  std::int64_t a_depth = 2;         // 500θ: A_c = H_c^[a_depth, oo)
  std::int64_t separation = 4;      // 10^3 θ
  std::int64_t vtc = 4;             // 10^4 θ: very translating multiplier
  std::int64_t greendlinger_depth = 2;
};

// "desk" or "paper"; theta is the measured constant the paper profile scales.
Profile make_profile(const std::string& name, Rational theta = Rational(1));
std::vector<std::pair<std::string, std::int64_t>> profile_table(const Profile& p);

// Working ball of the base cusped space plus the filling.
struct SpiderContext {
  std::shared_ptr<const QuotientContext> q;
  BallSnapshot ball;  // of X about 1
  Profile profile;

  SpiderContext(std::shared_ptr<const QuotientContext> qctx, std::int64_t radius, Profile p);
};

struct Spiderweb {
  std::size_t generation = 0;
  std::vector<Center> reps;       // C_reps, in the order they were added
  std::vector<Center> added;      // E of the step that produced this web
  std::vector<char> in_w;         // over ball indices
  std::uint64_t uncertified_pairs = 0;
  bool grew_by_neighborhood = false;

  std::vector<int> members() const;
  std::size_t size() const;
  bool contains(int i) const { return in_w[i] != 0; }
};

Spiderweb initial_spiderweb(const SpiderContext& sc);
Spiderweb enlarge(const SpiderContext& sc, const Spiderweb& w);

// Centers whose A_c meets the vertex set (within the ball).
std::vector<Center> centers_met(const SpiderContext& sc, const std::vector<char>& set);
// N_r(set) inside the ball.
std::vector<char> neighborhood(const BallSnapshot& ball, const std::vector<char>& set, std::int64_t r);
// W together with the A_c of its centers.
std::vector<char> saturated(const SpiderContext& sc, const Spiderweb& w);

struct GrowthReport {
  std::uint64_t expected = 0;  // reduced words, empty word included
  std::uint64_t observed = 0;  // distinct normal forms
  std::size_t factors = 0;
  std::int64_t syllables = 0;
  std::int64_t exponent_bound = 0;
  bool equal() const { return expected == observed; }
};
// Words in the abstract free product of the cyclic groups <k_j>, with at
// most `syllables` syllables and exponents in [-e, e] \ {0}, evaluated in G.
GrowthReport kernel_growth_check(const GroupContext& ctx, const std::vector<GroupElement>& factor_gens,
                                 std::int64_t syllables, std::int64_t exponent_bound = 1);
std::vector<GroupElement> web_factor_generators(const SpiderContext& sc, const Spiderweb& w);

struct AxiomReport {
  Rational s1_defect{0};
  bool s1 = false;
  bool s2 = false;  // every center met by N_s2(W) is in the K_W-orbit of a rep
  std::string s2_witness;
  bool s3 = false;
  std::uint64_t s3_checked = 0;
  std::uint64_t s3_skipped = 0;  // translates leaving the ball
  std::string s3_witness;
  GrowthReport s4;
  bool s4_checked = false;
  std::string s4_skipped;
  bool all() const { return s1 && s2 && s3 && s4_checked && s4.equal(); }
};
AxiomReport verify_axioms(const SpiderContext& sc, const Spiderweb& w, std::int64_t margin);

struct ExhaustReport {
  std::vector<Spiderweb> webs;
  bool nested = true;
  bool covered = false;      // Cayley vertices of B_{R - margin}
  std::int64_t margin = 0;
  std::size_t covered_at = 0;  // first generation with coverage
  std::string stop_reason;
};
ExhaustReport exhaust(const SpiderContext& sc, std::size_t max_generations);

}  // namespace fillinglab

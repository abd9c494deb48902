#include "doctest.h"

#include "fillinglab/fixture.hpp"
#include "fillinglab/spiderweb.hpp"
#include "helpers.hpp"

using namespace fillinglab;
using testing_support::to_word;

namespace {

std::shared_ptr<const QuotientContext> fix1(const std::string& slopes) {
  const auto fx = builtin_fixture("FIX1");
  return std::make_shared<const QuotientContext>(fx.ctx, parse_slopes(fx.ctx, slopes));
}

std::uint64_t reduced_words(std::uint64_t m, std::int64_t syllables, std::int64_t e) {
  std::uint64_t total = 1, layer = 0;
  for (std::int64_t s = 1; s <= syllables; ++s) {
    layer = s == 1 ? m * 2 * e : layer * (m - 1) * 2 * e;
    total += layer;
  }
  return total;
}

// Distinct elements of <x,y> among reduced words in the given FIX1 factor
// generators, multiplied out with the oracle word arithmetic.
std::size_t oracle_distinct(const std::vector<oracle::Word>& gens, std::int64_t syllables) {
  const oracle::FreeProductXY g{0};
  std::set<oracle::Word> seen;
  struct Frame {
    oracle::Word w;
    std::int64_t len;
    std::size_t last;
  };
  std::vector<Frame> stack{{{}, 0, gens.size()}};
  while (!stack.empty()) {
    auto f = stack.back();
    stack.pop_back();
    seen.insert(f.w);
    if (f.len == syllables) continue;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (j == f.last) continue;
      for (int e : {1, -1}) stack.push_back({g.multiply(f.w, e > 0 ? gens[j] : g.inverse(gens[j])), f.len + 1, j});
    }
  }
  return seen.size();
}

}  // namespace

TEST_CASE("initial web and first enlargement") {
  const SpiderContext sc(fix1("8"), 4, make_profile("desk"));
  const auto w0 = initial_spiderweb(sc);
  CHECK(w0.size() == 1);
  CHECK(w0.contains(sc.ball.center()));
  CHECK(w0.reps.empty());
  const auto a0 = verify_axioms(sc, w0, 2);
  CHECK(a0.s1);
  CHECK(a0.s3);

  const auto w1 = enlarge(sc, w0);
  CHECK(w1.generation == 1);
  REQUIRE(w1.added.size() == 1);
  CHECK(w1.added[0].label.is_identity());
  CHECK(w1.added[0].periph == 0);
  for (int v : w0.members()) CHECK(w1.contains(v));
  const auto a1 = verify_axioms(sc, w1, 2);
  CHECK(a1.s1);
  CHECK(a1.s3);
  CHECK(a1.s4_checked);
  CHECK(a1.s4.equal());
}

TEST_CASE("corrupted webs fail the axioms") {
  const SpiderContext sc(fix1("8"), 6, make_profile("desk"));
  const auto w1 = enlarge(sc, initial_spiderweb(sc));
  REQUIRE(verify_axioms(sc, w1, 2).s3);

  // drop an x^8-translate of a member: no longer K_W-invariant
  const auto& ctx = sc.q->base();
  const auto x8 = ctx.parse_word("x^8");
  auto broken = w1;
  int dropped = -1;
  for (int v : w1.members()) {
    const auto& x = sc.ball.vertex(v);
    const auto j = sc.ball.index_of({ctx.multiply(x8, x.g), x.periph, x.depth});
    if (j && *j != v && w1.contains(*j)) {
      dropped = *j;
      break;
    }
  }
  REQUIRE(dropped >= 0);
  broken.in_w[dropped] = 0;
  CHECK_FALSE(verify_axioms(sc, broken, 0).s3);

  // two far-apart points without the geodesic between them
  auto sparse = initial_spiderweb(sc);
  sparse.in_w.assign(sc.ball.size(), 0);
  CuspedSpace xs(ctx);
  for (const char* wd : {"y^3", "y^-3"}) sparse.in_w[*sc.ball.index_of(xs.cayley(ctx.parse_word(wd)))] = 1;
  CHECK_FALSE(verify_axioms(sc, sparse, 0).s1);
}

TEST_CASE("free-product growth") {
  const auto fx = builtin_fixture("FIX1");
  const auto& ctx = fx.ctx;
  const std::vector<std::vector<std::string>> cases = {
      {"x^8"}, {"x^8", "y x^8 y^-1"}, {"x^8", "y x^8 y^-1", "y^2 x^8 y^-2"}, {"y x^16 y^-1", "x^-1 y x^8 y^-1 x"}};
  for (const auto& c : cases) {
    std::vector<GroupElement> gens;
    std::vector<oracle::Word> ow;
    for (const auto& s : c) {
      gens.push_back(ctx.parse_word(s));
      ow.push_back(to_word(gens.back()));
    }
    for (std::int64_t syl : {1, 2, 3, 4}) {
      const auto rep = kernel_growth_check(ctx, gens, syl);
      CHECK(rep.expected == reduced_words(c.size(), syl, 1));
      CHECK(rep.observed == oracle_distinct(ow, syl));
      CHECK(rep.equal());
    }
  }
  // negative control: the same factor twice
  const auto dup = kernel_growth_check(ctx, {ctx.parse_word("x^8"), ctx.parse_word("x^8")}, 4);
  CHECK_FALSE(dup.equal());
  CHECK(dup.observed == oracle_distinct({to_word(ctx.parse_word("x^8")), to_word(ctx.parse_word("x^8"))}, 4));
  // exponents up to 2
  const auto e2 = kernel_growth_check(ctx, {ctx.parse_word("x^8"), ctx.parse_word("y x^8 y^-1")}, 3, 2);
  CHECK(e2.expected == reduced_words(2, 3, 2));
  CHECK(e2.equal());
}

TEST_CASE("exhaustion on tiny balls") {
  const SpiderContext sc(fix1("8"), 0, make_profile("desk"));
  const auto rep = exhaust(sc, 3);
  CHECK(rep.nested);
  CHECK(rep.webs.front().size() == 1);

  const SpiderContext sc4(fix1("8"), 4, make_profile("desk"));
  const auto r4 = exhaust(sc4, 4);
  CHECK(r4.nested);
  CHECK(r4.webs.size() >= 2);
  for (std::size_t g = 1; g < r4.webs.size(); ++g) CHECK(r4.webs[g].size() >= r4.webs[g - 1].size());
  if (r4.covered) CHECK(r4.covered_at < r4.webs.size());
}

TEST_CASE("neighborhoods and saturation") {
  const SpiderContext sc(fix1("8"), 3, make_profile("desk"));
  const auto w0 = initial_spiderweb(sc);
  const auto n1 = neighborhood(sc.ball, w0.in_w, 1);
  const auto d = oracle::bfs(oracle::adjacency(sc.ball.size(), sc.ball.edge_list()), sc.ball.center());
  for (std::size_t i = 0; i < sc.ball.size(); ++i) CHECK((n1[i] != 0) == (d[i] <= 1));
  const auto w1 = enlarge(sc, w0);
  const auto sat = saturated(sc, w1);
  for (int v : w1.members()) CHECK(sat[v]);
  std::size_t deep = 0;
  for (std::size_t i = 0; i < sat.size(); ++i)
    if (sat[i] && !w1.in_w[i]) {
      ++deep;
      CHECK(sc.ball.level(static_cast<int>(i)) >= sc.profile.a_depth);
    }
  CHECK(centers_met(sc, n1).empty());
  CHECK(centers_met(sc, neighborhood(sc.ball, w0.in_w, 2)).size() == 1);
  (void)deep;
}

TEST_CASE("profiles") {
  const auto desk = make_profile("desk");
  CHECK(desk.qc == 2);
  CHECK(desk.vtc == 4);
  const auto paper = make_profile("paper", Rational(1, 2));
  CHECK(paper.qc == 2);
  CHECK(paper.grow == 5);
  CHECK(paper.vtc == 10000);
  CHECK_THROWS(make_profile("nope"));
  CHECK(profile_table(desk).size() >= 8);
}

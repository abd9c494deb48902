#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fillinglab/boundary.hpp"
#include "fillinglab/cusped.hpp"
#include "fillinglab/hyperbolicity.hpp"
#include "fillinglab/kv.hpp"
#include "fillinglab/quotient.hpp"
#include "fillinglab/spiderweb.hpp"
#include "fillinglab/topology.hpp"
#include "fillinglab/truncation.hpp"

namespace fillinglab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// How to rebuild a ball: exports carry this so that later subcommands work
// on the exact space rather than on a bare graph.
struct BallRecipe {
  std::string fixture = "FIX1";
  std::string slopes = "none";
  std::string model = "comb2";
  std::string kind = "X";  // X, X/K, T_G, X/K_W, T_W
  std::int64_t radius = 4;
  std::vector<std::pair<std::string, int>> reps;  // (coset word, peripheral) for X/K_W and T_W

  Json to_json() const;
  static BallRecipe from_json(const Json& j);
};

struct BuiltBall {
  BallRecipe recipe;
  std::shared_ptr<const QuotientContext> q;  // null for kind X
  QuotientBall qb;                           // space, ball, projection
};
BuiltBall build_ball(const BallRecipe& recipe);

Json ball_json(const BallSnapshot& ball, const Json& recipe, bool with_edges);
// Graph-only re-import (synthetic BallSnapshot with the stored radius).
BallSnapshot ball_from_json(const Json& j);
std::string edge_list_text(const BallSnapshot& ball);
BallSnapshot ball_from_edge_list(const std::string& text);

Json to_json(const HyperbolicityReport& r);
Json to_json(const TruncationInfo& t);
Json to_json(const EmbeddingReport& r, const GroupContext& ctx, const CuspedSpace& space);
Json to_json(const GreendlingerRun& r, const CuspedSpace& space, const GroupContext& ctx);
Json to_json(const VeryTranslatingReport& r, const CuspedSpace& space, const GroupContext& ctx);
Json to_json(const Profile& p);
Json to_json(const AxiomReport& a);
Json to_json(const GHReport& g, bool with_map);
Json to_json(const BettiProfile& p);
Json to_json(const ChainReport& c);
Json web_json(const Spiderweb& w, const CuspedSpace& space);

// Boundary export: points, exact products, rho-hat table and reports.
Json boundary_json(const BoundaryApprox& a, const ChainMetric& m, const std::optional<ChainReport>& lc);
struct LoadedBoundary {
  std::size_t n = 0;
  std::vector<double> metric;  // rho-hat
  std::vector<std::string> labels;
  double epsilon = 0;
  std::int64_t radius = 0;
};
LoadedBoundary boundary_from_json(const Json& j);

std::string rational_str(Rational r);
std::string fmt_double(double x);  // fixed 6 significant digits, "inf" for infinity
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

// ---------------------------------------------------------------------------

struct Scenario {
  std::string name = "scenario";
  std::string fixture = "FIX1";
  std::string slopes = "none";
  std::string model = "comb2";
  std::int64_t radius = 4;          // build / delta ball
  std::string profile = "desk";
  std::int64_t spider_radius = 6;
  std::size_t generations = 5;
  std::int64_t axiom_margin = 2;
  std::int64_t sphere_radius = 2;
  std::string epsilon = "auto";
  std::string scales = "auto";
  std::int64_t strong_radius = 2;
  std::int64_t embed_radius = 2;
  double gh_lambda = 1.0;
  std::int64_t certify = 32;
  std::uint64_t seed = 1;
  bool exhaustive = false;
  std::vector<std::string> stages;  // empty: every stage that applies

  static Scenario parse(const KeyValueFile& kv);
  static Scenario load(const std::filesystem::path& path);
  KeyValueFile to_kv() const;  // canonical form, used for the config hash
  std::vector<std::string> effective_stages() const;
};

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string text() const;
};

struct RunReport {
  Json json;
  std::vector<std::pair<std::string, double>> timings;  // sidecar only
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, std::string>> edge_lists;  // file name, text
};

RunReport run_scenario(const Scenario& sc);

// format: all | json | csv | edges. Writes report.json, timings.json and the
// tables/edge lists into `dir`; returns the written paths.
std::vector<std::filesystem::path> export_report(const RunReport& r, const std::filesystem::path& dir,
                                                 const std::string& format = "all");
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace fillinglab

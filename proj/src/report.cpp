#include "fillinglab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fillinglab/fixture.hpp"

namespace fillinglab {

std::string rational_str(Rational r) { return r.str(); }

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------
// balls

Json BallRecipe::to_json() const {
  Json j;
  j["fixture"] = fixture;
  j["slopes"] = slopes;
  j["model"] = model;
  j["kind"] = kind;
  j["radius"] = radius;
  Json r = Json::array();
  for (const auto& [word, periph] : reps) r.push_back({{"coset", word}, {"peripheral", periph}});
  j["reps"] = r;
  return j;
}

BallRecipe BallRecipe::from_json(const Json& j) {
  BallRecipe r;
  r.fixture = j.at("fixture").get<std::string>();
  r.slopes = j.value("slopes", std::string("none"));
  r.model = j.value("model", std::string("comb2"));
  r.kind = j.value("kind", std::string("X"));
  r.radius = j.at("radius").get<std::int64_t>();
  if (j.contains("reps"))
    for (const auto& e : j["reps"]) r.reps.emplace_back(e.at("coset").get<std::string>(), e.at("peripheral").get<int>());
  return r;
}

BuiltBall build_ball(const BallRecipe& recipe) {
  BuiltBall out;
  out.recipe = recipe;
  const auto fx = resolve_fixture(recipe.fixture);
  const auto model = HoroballModel::parse(recipe.model);
  if (recipe.kind == "X") {
    auto space = std::make_shared<CuspedSpace>(fx.ctx, model);
    out.qb.kind = "X";
    out.qb.space = space;
    out.qb.ball = BallSnapshot::build(*space, space->cayley({}), recipe.radius);
    out.qb.project = [](const CuspedVertex& v) { return v; };
    return out;
  }
  if (recipe.model != "comb2") throw std::invalid_argument("quotient balls use the comb2 model");
  auto q = std::make_shared<QuotientContext>(fx.ctx, parse_slopes(fx.ctx, recipe.slopes));
  out.q = q;
  if (recipe.kind == "X/K" || recipe.kind == "T_G") {
    out.qb = quotient_cusped_ball(*q, recipe.radius, recipe.kind == "T_G");
  } else if (recipe.kind == "X/K_W" || recipe.kind == "T_W") {
    std::vector<Center> reps;
    for (const auto& [word, periph] : recipe.reps) {
      const auto g = fx.ctx.parse_word(word);
      reps.push_back({fx.ctx.peripheral_coset_id(g, periph), periph});
    }
    out.qb = partial_quotient_ball(*q, reps, recipe.radius, recipe.kind == "T_W");
  } else {
    throw std::invalid_argument("unknown ball kind '" + recipe.kind + "' (X, X/K, T_G, X/K_W, T_W)");
  }
  return out;
}

Json ball_json(const BallSnapshot& ball, const Json& recipe, bool with_edges) {
  Json j;
  j["kind"] = "ball";
  j["fillinglab"] = kVersion;
  j["recipe"] = recipe;
  j["model"] = ball.model_name();
  j["unit"] = ball.unit();
  j["radius"] = ball.radius();
  j["center"] = ball.center();
  j["complete"] = ball.complete();
  j["vertices"] = ball.size();
  j["edges"] = ball.edge_count();
  std::map<std::int64_t, std::size_t> spheres;
  for (std::size_t i = 0; i < ball.size(); ++i) ++spheres[ball.center_distance(static_cast<int>(i))];
  Json sizes = Json::array();
  for (auto [d, c] : spheres) sizes.push_back({d, c});
  j["sphere_sizes"] = sizes;
  if (with_edges) {
    Json labels = Json::array(), levels = Json::array(), periph = Json::array();
    for (std::size_t i = 0; i < ball.size(); ++i) {
      labels.push_back(ball.label(static_cast<int>(i)));
      levels.push_back(ball.level(static_cast<int>(i)));
      periph.push_back(ball.periph(static_cast<int>(i)));
    }
    j["labels"] = labels;
    j["levels"] = levels;
    j["periph"] = periph;
    Json edges = Json::array();
    for (auto [u, v] : ball.edge_list()) edges.push_back({u, v});
    j["edge_list"] = edges;
  }
  return j;
}

BallSnapshot ball_from_json(const Json& j) {
  if (!j.contains("edge_list")) throw std::invalid_argument("ball export has no edge list");
  if (j.value("unit", 1) != 1) throw std::invalid_argument("weighted balls cannot be re-imported from edges");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edge_list"]) edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  std::vector<std::string> labels;
  if (j.contains("labels"))
    for (const auto& l : j["labels"]) labels.push_back(l.get<std::string>());
  const bool complete = j.value("complete", true);
  return BallSnapshot::from_edges(j.at("vertices").get<std::size_t>(), edges, j.value("center", 0), labels,
                                  complete ? -1 : j.at("radius").get<std::int64_t>());
}

std::string edge_list_text(const BallSnapshot& ball) {
  std::ostringstream os;
  const auto edges = ball.edge_list();
  os << "# fillinglab edge list\n";
  os << "# vertices " << ball.size() << " edges " << edges.size() << " center " << ball.center() << " radius "
     << ball.radius() << " complete " << (ball.complete() ? 1 : 0) << "\n";
  os << "# v index level peripheral label\n";
  for (std::size_t i = 0; i < ball.size(); ++i)
    os << "v " << i << ' ' << ball.level(static_cast<int>(i)) << ' ' << ball.periph(static_cast<int>(i)) << ' '
       << ball.label(static_cast<int>(i)) << "\n";
  for (auto [u, v] : edges) os << u << ' ' << v << "\n";
  return os.str();
}

BallSnapshot ball_from_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  int center = 0;
  std::int64_t radius = -1;
  bool complete = true, header = false;
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream h(line.substr(1));
      std::string key;
      h >> key;
      if (key != "vertices") continue;
      std::size_t m = 0;
      int comp = 1;
      std::string k2, k3, k4, k5;
      h >> n >> k2 >> m >> k3 >> center >> k4 >> radius >> k5 >> comp;
      complete = comp != 0;
      header = true;
      labels.assign(n, "");
      continue;
    }
    std::istringstream r(line);
    if (line[0] == 'v') {
      std::string tag;
      std::size_t idx = 0;
      std::int64_t level = 0;
      int periph = 0;
      r >> tag >> idx >> level >> periph;
      std::string label;
      std::getline(r, label);
      if (idx < labels.size()) labels[idx] = trim(label);
      continue;
    }
    int u = 0, v = 0;
    if (!(r >> u >> v)) throw std::invalid_argument("bad edge line '" + line + "'");
    edges.emplace_back(u, v);
  }
  if (!header) throw std::invalid_argument("edge list has no vertex header");
  return BallSnapshot::from_edges(n, edges, center, labels, complete ? -1 : radius);
}

// ---------------------------------------------------------------------------
// reports

Json to_json(const HyperbolicityReport& r) {
  Json j;
  j["theta_4pt"] = r.theta_4pt.str();
  j["delta_thin"] = r.delta_thin.str();
  j["policy"] = r.policy;
  j["seed"] = r.seed;
  j["tested"] = r.tested;
  j["exhaustive"] = r.exhaustive;
  j["witness"] = r.witness;
  return j;
}

Json to_json(const TruncationInfo& t) {
  Json j;
  j["graph"] = t.graph;
  j["t"] = t.t;
  j["certification_radius"] = t.certification_radius;
  j["points"] = t.points;
  Json th = Json::array();
  for (auto v : t.theta_by_depth) th.push_back(v.str());
  j["theta_by_depth"] = th;
  j["policy"] = t.policy;
  j["failure_witnessed"] = t.failure_witnessed;
  j["log2_theta"] = fmt_double(t.log2_theta);
  return j;
}

Json to_json(const EmbeddingReport& r, const GroupContext&, const CuspedSpace& space) {
  Json j;
  j["isometric"] = r.isometric;
  j["radius"] = r.radius;
  j["pairs"] = r.pairs;
  Json w = Json::array();
  for (const auto& v : r.witness) w.push_back(space.format(v));
  j["witness"] = w;
  j["base_distance"] = r.base_distance;
  j["quotient_distance"] = r.quotient_distance;
  return j;
}

Json to_json(const GreendlingerRun& r, const CuspedSpace& space, const GroupContext& ctx) {
  Json j;
  j["start"] = ctx.format(r.start);
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"center", space.format(s.center)}, {"k", ctx.format(s.k)}, {"before", s.before}, {"after", s.after}});
  j["steps"] = steps;
  j["terminated"] = r.terminated;
  j["strictly_decreasing"] = r.strictly_decreasing;
  j["failure"] = r.failure;
  return j;
}

Json to_json(const VeryTranslatingReport& r, const CuspedSpace& space, const GroupContext& ctx) {
  Json j;
  j["worst_ratio"] = r.worst_ratio.str();
  j["pass"] = r.pass;
  j["multiplier"] = r.multiplier;
  j["a_depth"] = r.a_depth;
  j["samples"] = r.samples;
  j["worst_x"] = space.format(r.worst_x);
  j["worst_g"] = ctx.format(r.worst_g);
  j["worst_distance"] = r.worst_distance;
  return j;
}

Json to_json(const Profile& p) {
  Json j;
  j["name"] = p.name;
  j["theta"] = p.theta.str();
  for (const auto& [k, v] : profile_table(p)) j[k] = v;
  return j;
}

Json to_json(const AxiomReport& a) {
  Json j;
  j["s1_defect"] = a.s1_defect.str();
  j["s1"] = a.s1;
  j["s2"] = a.s2;
  j["s2_witness"] = a.s2_witness;
  j["s3"] = a.s3;
  j["s3_checked"] = a.s3_checked;
  j["s3_skipped"] = a.s3_skipped;
  j["s3_witness"] = a.s3_witness;
  j["s4_checked"] = a.s4_checked;
  j["s4_skipped"] = a.s4_skipped;
  j["s4"] = {{"expected", a.s4.expected},
             {"observed", a.s4.observed},
             {"factors", a.s4.factors},
             {"syllables", a.s4.syllables},
             {"exponent_bound", a.s4.exponent_bound},
             {"equal", a.s4.equal()}};
  j["all"] = a.all();
  return j;
}

Json to_json(const GHReport& g, bool with_map) {
  Json j;
  j["lambda"] = g.lambda;
  j["epsilon"] = g.epsilon;
  j["distortion"] = g.distortion;
  j["coverage"] = g.coverage;
  j["lower_bound"] = g.lower_bound;
  j["lower_bound_reason"] = g.lower_bound_reason;
  j["seed"] = g.seed;
  j["improvements"] = g.improvements;
  if (with_map) j["map"] = g.map;
  return j;
}

Json to_json(const BettiProfile& p) {
  Json j;
  j["points"] = p.points;
  j["original_points"] = p.original_points;
  j["subsample_seed"] = p.seed;
  j["scales"] = p.scales;
  Json b = Json::array();
  for (const auto& t : p.betti) b.push_back({t[0], t[1], t[2]});
  j["betti"] = b;
  j["simplices"] = p.simplices;
  Json ob = Json::array();
  for (char c : p.over_budget) ob.push_back(c != 0);
  j["over_budget"] = ob;
  if (p.plateau) {
    j["plateau"] = {{"betti", {(*p.plateau)[0], (*p.plateau)[1], (*p.plateau)[2]}},
                    {"from", p.plateau_from},
                    {"to", p.plateau_to},
                    {"length", p.plateau_length}};
  } else {
    j["plateau"] = nullptr;
  }
  j["proxy"] = "homological";
  return j;
}

Json to_json(const ChainReport& c) {
  Json j;
  j["disconnected"] = c.disconnected;
  j["L"] = c.disconnected ? Json(nullptr) : Json(c.L);
  j["pairs"] = c.pairs;
  j["below_floor"] = c.below_floor;
  j["floor"] = c.floor;
  j["worst_pair"] = {c.worst_p, c.worst_q};
  j["worst_chain"] = c.worst_chain;
  return j;
}

Json web_json(const Spiderweb& w, const CuspedSpace& space) {
  Json j;
  j["generation"] = w.generation;
  j["size"] = w.size();
  Json reps = Json::array(), added = Json::array();
  for (const auto& c : w.reps) reps.push_back(space.format(c));
  for (const auto& c : w.added) added.push_back(space.format(c));
  j["reps"] = reps;
  j["added"] = added;
  j["grew_by_neighborhood"] = w.grew_by_neighborhood;
  j["uncertified_pairs"] = w.uncertified_pairs;
  return j;
}

Json boundary_json(const BoundaryApprox& a, const ChainMetric& m, const std::optional<ChainReport>& lc) {
  Json j;
  j["kind"] = "boundary";
  j["fillinglab"] = kVersion;
  j["source"] = a.source;
  j["radius"] = a.radius;
  j["epsilon"] = a.epsilon;
  j["unit"] = a.unit;
  j["basepoint"] = a.basepoint;
  j["points"] = a.size();
  j["diagonal_convention"] = "rho(x,x) = 0";
  j["labels"] = a.labels;
  j["gromov2"] = a.product2;
  j["rho_hat"] = m.table;
  j["kappa_hat"] = m.kappa_hat;
  j["triangle_ok"] = m.triangle_ok;
  j["uncertified_pairs"] = a.uncertified;
  j["marking"] = a.marking;
  j["components"] = a.components;
  j["density_delta"] = std::isinf(a.density_delta) ? Json(nullptr) : Json(a.density_delta);
  j["linear_connectedness"] = lc ? to_json(*lc) : Json(nullptr);
  return j;
}

LoadedBoundary boundary_from_json(const Json& j) {
  if (j.value("kind", std::string()) != "boundary") throw std::invalid_argument("not a boundary export");
  LoadedBoundary b;
  b.n = j.at("points").get<std::size_t>();
  b.metric = j.at("rho_hat").get<std::vector<double>>();
  b.labels = j.at("labels").get<std::vector<std::string>>();
  b.epsilon = j.at("epsilon").get<double>();
  b.radius = j.at("radius").get<std::int64_t>();
  if (b.metric.size() != b.n * b.n) throw std::invalid_argument("boundary table has the wrong size");
  return b;
}

}  // namespace fillinglab

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fillinglab/budget.hpp"
#include "fillinglab/fixture.hpp"
#include "fillinglab/report.hpp"

namespace fillinglab {

namespace {

const std::vector<std::string> kStages = {"build", "delta", "truncate", "fill", "spiderweb", "boundary", "topology", "gh"};

const std::set<std::string> kKeys = {"name",          "fixture",       "slopes",     "model",     "radius",
                                     "profile",       "spider_radius", "generations", "axiom_margin", "sphere_radius",
                                     "epsilon",       "scales",        "strong_radius", "embed_radius", "gh_lambda",
                                     "certify",       "seed",          "exhaustive", "stages"};

std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

class StageTimer {
 public:
  explicit StageTimer(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
  template <class F>
  void run(const std::string& stage, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded("stage " + stage + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("stage " + stage + ": " + e.what());
    }
    out_.emplace_back(stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

 private:
  std::vector<std::pair<std::string, double>>& out_;
};

std::vector<double> auto_grid(const std::vector<double>& d, std::size_t n) {
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = d[i * n + j];
      if (x <= 0) continue;
      lo = lo == 0 ? x : std::min(lo, x);
      hi = std::max(hi, x);
    }
  std::vector<double> grid;
  if (lo == 0) return {1.0};
  for (int k = 0; k <= 12; ++k) grid.push_back(lo * std::pow(hi / lo, k / 12.0));
  return grid;
}

Json sphere_sizes(const BallSnapshot& b) {
  std::map<std::int64_t, std::size_t> s;
  for (std::size_t i = 0; i < b.size(); ++i) ++s[b.center_distance(static_cast<int>(i))];
  Json out = Json::array();
  for (auto [d, c] : s) out.push_back({d, c});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Scenario Scenario::parse(const KeyValueFile& kv) {
  Scenario s;
  for (const auto& [key, value] : kv.entries()) {
    if (!kKeys.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    if (key == "name") s.name = value;
    else if (key == "fixture") s.fixture = value;
    else if (key == "slopes") s.slopes = value;
    else if (key == "model") s.model = value;
    else if (key == "radius") s.radius = to_int(key, value);
    else if (key == "profile") s.profile = value;
    else if (key == "spider_radius") s.spider_radius = to_int(key, value);
    else if (key == "generations") s.generations = static_cast<std::size_t>(to_int(key, value));
    else if (key == "axiom_margin") s.axiom_margin = to_int(key, value);
    else if (key == "sphere_radius") s.sphere_radius = to_int(key, value);
    else if (key == "epsilon") s.epsilon = value;
    else if (key == "scales") s.scales = value;
    else if (key == "strong_radius") s.strong_radius = to_int(key, value);
    else if (key == "embed_radius") s.embed_radius = to_int(key, value);
    else if (key == "gh_lambda") s.gh_lambda = to_real(key, value);
    else if (key == "certify") s.certify = to_int(key, value);
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "exhaustive") s.exhaustive = to_bool(key, value);
    else if (key == "stages") {
      s.stages.clear();
      for (auto& st : split(value, ',')) {
        const auto t = trim(st);
        if (t.empty()) continue;
        if (std::find(kStages.begin(), kStages.end(), t) == kStages.end())
          throw std::invalid_argument("config key 'stages': unknown stage '" + t + "'");
        s.stages.push_back(t);
      }
    }
  }
  Fixture fx;
  try {
    fx = resolve_fixture(s.fixture);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config key 'fixture': " + std::string(e.what()));
  }
  try {
    parse_slopes(fx.ctx, s.slopes);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config key 'slopes': " + std::string(e.what()));
  }
  try {
    HoroballModel::parse(s.model);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config key 'model': " + std::string(e.what()));
  }
  try {
    make_profile(s.profile);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config key 'profile': " + std::string(e.what()));
  }
  if (s.epsilon != "auto" && !(to_real("epsilon", s.epsilon) > 0))
    throw std::invalid_argument("config key 'epsilon': must be positive or 'auto'");
  if (!(s.gh_lambda >= 1)) throw std::invalid_argument("config key 'gh_lambda': must be >= 1");
  if (s.scales != "auto") {
    try {
      parse_scale_grid(s.scales);
    } catch (const std::exception& e) {
      throw std::invalid_argument("config key 'scales': " + std::string(e.what()));
    }
  }
  if (s.radius < 0) throw std::invalid_argument("config key 'radius': must be >= 0");
  if (s.sphere_radius < 1) throw std::invalid_argument("config key 'sphere_radius': must be >= 1");
  if (s.gh_lambda < 1) throw std::invalid_argument("config key 'gh_lambda': must be >= 1");
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) { return parse(KeyValueFile::load(path)); }

KeyValueFile Scenario::to_kv() const {
  KeyValueFile kv;
  kv.set("name", name);
  kv.set("fixture", fixture);
  kv.set("slopes", slopes);
  kv.set("model", model);
  kv.set("radius", std::to_string(radius));
  kv.set("profile", profile);
  kv.set("spider_radius", std::to_string(spider_radius));
  kv.set("generations", std::to_string(generations));
  kv.set("axiom_margin", std::to_string(axiom_margin));
  kv.set("sphere_radius", std::to_string(sphere_radius));
  kv.set("epsilon", epsilon);
  kv.set("scales", scales);
  kv.set("strong_radius", std::to_string(strong_radius));
  kv.set("embed_radius", std::to_string(embed_radius));
  kv.set("gh_lambda", num(gh_lambda));
  kv.set("certify", std::to_string(certify));
  kv.set("seed", std::to_string(seed));
  kv.set("exhaustive", exhaustive ? "true" : "false");
  std::string st;
  for (const auto& s : stages) st += (st.empty() ? "" : ",") + s;
  kv.set("stages", st);
  return kv;
}

std::vector<std::string> Scenario::effective_stages() const {
  const auto fx = resolve_fixture(fixture);
  const bool filled = !parse_slopes(fx.ctx, slopes).empty();
  std::vector<std::string> out;
  for (const auto& s : kStages) {
    if (!filled && s != "build" && s != "delta") continue;
    if (!stages.empty() && std::find(stages.begin(), stages.end(), s) == stages.end()) continue;
    out.push_back(s);
  }
  return out;
}

std::string CsvTable::text() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

RunReport run_scenario(const Scenario& sc) {
  RunReport out;
  Json& j = out.json;
  const auto fx = resolve_fixture(sc.fixture);
  const auto stages = sc.effective_stages();
  const auto has = [&](const char* s) { return std::find(stages.begin(), stages.end(), s) != stages.end(); };

  j["kind"] = "report";
  j["fillinglab"] = kVersion;
  j["name"] = sc.name;
  const auto kv = sc.to_kv();
  j["config_hash"] = hex64(fnv1a(kv.serialize()));
  j["seed"] = sc.seed;
  Json cfg;
  for (const auto& [k, v] : kv.entries()) cfg[k] = v;
  j["config"] = cfg;
  j["fixture"] = {{"name", fx.name}, {"group", fx.ctx.describe()}};
  j["stages_run"] = stages;
  Json st = Json::object();

  StageTimer timer(out.timings);
  SamplePolicy policy;
  policy.seed = sc.seed;
  if (sc.exhaustive) policy.mode = SamplePolicy::Mode::Exhaustive;

  std::optional<BuiltBall> base;
  const auto base_ball = [&]() -> BuiltBall& {
    if (!base) base = build_ball(BallRecipe{sc.fixture, "none", sc.model, "X", sc.radius, {}});
    return *base;
  };

  Rational delta_thin{0}, theta{1};
  bool have_delta = false;
  if (has("build")) {
    timer.run("build", [&] {
      auto& b = base_ball();
      st["build"] = ball_json(b.qb.ball, b.recipe.to_json(), false);
      CsvTable t{"distances.csv", {"index", "label", "level", "peripheral", "distance"}, {}};
      for (std::size_t i = 0; i < b.qb.ball.size(); ++i) {
        const int k = static_cast<int>(i);
        t.rows.push_back({std::to_string(i), b.qb.ball.label(k), std::to_string(b.qb.ball.level(k)),
                          std::to_string(b.qb.ball.periph(k)), std::to_string(b.qb.ball.center_distance(k))});
      }
      out.tables.push_back(std::move(t));
      if (!b.qb.ball.weighted()) out.edge_lists.emplace_back("ball.edges", edge_list_text(b.qb.ball));
    });
  }
  if (has("delta")) {
    timer.run("delta", [&] {
      const auto& ball = base_ball().qb.ball;
      const auto four = four_point_delta(ball, policy);
      const auto thin = thin_triangle_delta(ball, policy);
      st["delta"] = {{"kind", "delta"}, {"four_point", to_json(four)}, {"thin_triangle", to_json(thin)}};
      delta_thin = thin.delta_thin;
      theta = four.theta_4pt;
      have_delta = true;
    });
  }

  std::shared_ptr<QuotientContext> q;
  const auto qctx = [&]() -> QuotientContext& {
    if (!q) {
      TruncationOptions topt;
      topt.certify_radius = sc.certify;
      topt.seed = sc.seed;
      q = std::make_shared<QuotientContext>(fx.ctx, parse_slopes(fx.ctx, sc.slopes), topt);
    }
    return *q;
  };

  if (has("truncate")) {
    timer.run("truncate", [&] {
      auto& qc = qctx();
      Json arr = Json::array();
      for (int i : qc.quotient().peripheral()) {
        Json e = to_json(qc.truncation(i));
        e["factor"] = i;
        e["quotient_kind"] = to_string(qc.filling().kind(i));
        arr.push_back(e);
      }
      st["truncate"] = {{"kind", "truncation"}, {"peripherals", arr}};
    });
  }

  if (has("fill")) {
    timer.run("fill", [&] {
      auto& qc = qctx();
      const auto emb = ball_embedding_check(qc, sc.embed_radius);
      CuspedSpace xs(qc.base());
      const auto girth = qc.filling().girth();
      const auto tg = quotient_cusped_ball(qc, sc.radius, true);
      st["fill"] = {{"kind", "fill"},
                    {"quotient", qc.quotient().describe()},
                    {"girth", girth ? Json(*girth) : Json(nullptr)},
                    {"embedding", to_json(emb, qc.base(), xs)},
                    {"truncated_quotient_ball", {{"radius", sc.radius}, {"vertices", tg.ball.size()},
                                                 {"sphere_sizes", sphere_sizes(tg.ball)}}}};
      out.edge_lists.emplace_back("tg.edges", edge_list_text(tg.ball));
    });
  }

  std::optional<SpiderContext> spider;
  ExhaustReport ex;
  if (has("spiderweb") || has("gh")) {
    timer.run("spiderweb", [&] {
      qctx();
      std::shared_ptr<const QuotientContext> qp = q;
      const Profile prof = make_profile(sc.profile, sc.profile == "paper" ? (have_delta ? theta : Rational(1)) : Rational(1));
      spider.emplace(qp, sc.spider_radius, prof);
      ex = exhaust(*spider, sc.generations);
      if (!has("spiderweb")) return;
      CuspedSpace xs(qp->base());
      Json webs = Json::array();
      CsvTable t{"spiderweb.csv",
                 {"generation", "size", "reps", "added", "s1_defect", "s1", "s2", "s3", "s4_expected", "s4_observed",
                  "s4_checked", "uncertified_pairs"},
                 {}};
      for (const auto& w : ex.webs) {
        const auto ax = verify_axioms(*spider, w, sc.axiom_margin);
        Json e = web_json(w, xs);
        e["axioms"] = to_json(ax);
        webs.push_back(e);
        t.rows.push_back({std::to_string(w.generation), std::to_string(w.size()), std::to_string(w.reps.size()),
                          std::to_string(w.added.size()), ax.s1_defect.str(), ax.s1 ? "1" : "0", ax.s2 ? "1" : "0",
                          ax.s3 ? "1" : "0", std::to_string(ax.s4.expected), std::to_string(ax.s4.observed),
                          ax.s4_checked ? "1" : "0", std::to_string(w.uncertified_pairs)});
      }
      st["spiderweb"] = {{"kind", "spiderweb"},
                         {"profile", to_json(spider->profile)},
                         {"ball_radius", sc.spider_radius},
                         {"ball_vertices", spider->ball.size()},
                         {"axiom_margin", sc.axiom_margin},
                         {"webs", webs},
                         {"nested", ex.nested},
                         {"covered", ex.covered},
                         {"covered_at", ex.covered ? Json(ex.covered_at) : Json(nullptr)},
                         {"coverage_margin", ex.margin},
                         {"stop_reason", ex.stop_reason}};
      out.tables.push_back(std::move(t));
    });
  }

  double eps = 0;
  std::optional<QuotientBall> tg_sphere_ball;
  std::optional<BoundaryApprox> tg_sphere;
  std::optional<ChainMetric> tg_metric;
  const auto boundary_setup = [&] {
    if (tg_sphere) return;
    eps = sc.epsilon == "auto" ? auto_epsilon(have_delta ? delta_thin : Rational(1)) : std::stod(sc.epsilon);
    tg_sphere_ball = quotient_cusped_ball(qctx(), 2 * sc.sphere_radius, true);
    tg_sphere = sphere_approx(tg_sphere_ball->ball, sc.sphere_radius, eps);
    mark_peripheral(*tg_sphere, tg_sphere_ball->ball, *tg_sphere_ball->space);
    tg_metric = chain_metric(*tg_sphere);
  };

  if (has("boundary")) {
    timer.run("boundary", [&] {
      boundary_setup();
      const auto lc = linear_connectedness(tg_metric->table, tg_sphere->size());
      Json b = boundary_json(*tg_sphere, *tg_metric, lc);
      b["epsilon_policy"] = sc.epsilon == "auto" ? "auto: 1/(6 max(delta,1/2))" : "fixed";
      st["boundary"] = b;
      CsvTable t{"rho_hat.csv", {"i", "j", "label_i", "label_j", "gromov", "rho", "rho_hat"}, {}};
      const std::size_t n = tg_sphere->size();
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = a + 1; c < n; ++c)
          t.rows.push_back({std::to_string(a), std::to_string(c), tg_sphere->labels[a], tg_sphere->labels[c],
                            tg_sphere->gromov(a, c).str(), num(tg_sphere->rho(a, c)), num((*tg_metric)(a, c))});
      out.tables.push_back(std::move(t));
    });
  }

  if (has("topology")) {
    timer.run("topology", [&] {
      boundary_setup();
      const auto grid = sc.scales == "auto" ? auto_grid(tg_metric->table, tg_sphere->size()) : parse_scale_grid(sc.scales);
      const auto prof = betti_profile(tg_metric->table, tg_sphere->size(), grid, 80, sc.seed);
      Json t = to_json(prof);
      t["kind"] = "topology";
      t["scale_policy"] = sc.scales == "auto" ? "auto: 13 geometric scales between the extreme distances" : "fixed";
      st["topology"] = t;
      CsvTable csv{"betti.csv", {"scale", "b0", "b1", "b2", "simplices", "over_budget"}, {}};
      for (std::size_t i = 0; i < prof.scales.size(); ++i)
        csv.rows.push_back({num(prof.scales[i]), std::to_string(prof.betti[i][0]), std::to_string(prof.betti[i][1]),
                            std::to_string(prof.betti[i][2]), std::to_string(prof.simplices[i]),
                            prof.over_budget[i] ? "1" : "0"});
      out.tables.push_back(std::move(csv));
    });
  }

  if (has("gh")) {
    timer.run("gh", [&] {
      boundary_setup();
      auto& qc = qctx();
      const auto tg_strong = quotient_cusped_ball(qc, 2 * sc.strong_radius, true);
      Json series = Json::array();
      CsvTable csv{"gh.csv",
                   {"generation", "sphere_points", "target_points", "epsilon", "distortion", "coverage", "lower_bound",
                    "start", "strong_convergence"},
                   {}};
      double prev = std::numeric_limits<double>::infinity();
      bool nonincreasing = true;
      for (const auto& w : ex.webs) {
        const auto strong_ball = partial_quotient_ball(qc, w.reps, 2 * sc.strong_radius, true);
        const auto strong = strong_convergence_check(strong_ball, tg_strong, sc.strong_radius);
        const auto tw = partial_quotient_ball(qc, w.reps, 2 * sc.sphere_radius, true);
        const auto a = sphere_approx(tw.ball, sc.sphere_radius, eps);
        const auto ma = chain_metric(a);
        GHOptions o1;
        o1.lambda = sc.gh_lambda;
        o1.seed = sc.seed;
        o1.initial = provenance_map(a, *tg_sphere, tg_sphere_ball->project);
        GHOptions o2 = o1;
        o2.initial.clear();
        const auto g1 = weak_gh_estimate(ma.table, a.size(), tg_metric->table, tg_sphere->size(), o1);
        const auto g2 = weak_gh_estimate(ma.table, a.size(), tg_metric->table, tg_sphere->size(), o2);
        const bool first = g1.epsilon <= g2.epsilon;
        const auto& g = first ? g1 : g2;
        Json e = to_json(g, false);
        e["generation"] = w.generation;
        e["sphere_points"] = a.size();
        e["kappa_hat"] = ma.kappa_hat;
        e["start"] = first ? "provenance" : "greedy";
        e["strong_convergence"] = {{"radius", sc.strong_radius}, {"isometric", strong.isometric},
                                   {"failure", strong.failure}};
        series.push_back(e);
        csv.rows.push_back({std::to_string(w.generation), std::to_string(a.size()), std::to_string(tg_sphere->size()),
                            num(g.epsilon), num(g.distortion), num(g.coverage), num(g.lower_bound),
                            first ? "provenance" : "greedy", strong.isometric ? "1" : "0"});
        if (g.epsilon > prev) nonincreasing = false;
        prev = g.epsilon;
      }
      st["gh"] = {{"kind", "gh"},
                  {"lambda", sc.gh_lambda},
                  {"epsilon", eps},
                  {"sphere_radius", sc.sphere_radius},
                  {"target_points", tg_sphere->size()},
                  {"policy", "best of provenance and greedy starts, seeded local search"},
                  {"series", series},
                  {"nonincreasing", nonincreasing}};
      out.tables.push_back(std::move(csv));
    });
  }

  j["stages"] = st;
  return out;
}

std::vector<std::filesystem::path> export_report(const RunReport& r, const std::filesystem::path& dir,
                                                 const std::string& format) {
  if (format != "all" && format != "json" && format != "csv" && format != "edges")
    throw std::invalid_argument("unknown export format '" + format + "' (all|json|csv|edges)");
  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(dir);
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot create " + dir.string() + ": " + e.what());
  }
  const auto put = [&](const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    written.push_back(dir / name);
  };
  if (format == "all" || format == "json") {
    put("report.json", r.json.dump(2) + "\n");
    Json t;
    t["kind"] = "timings";
    t["config_hash"] = r.json.value("config_hash", std::string());
    t["seed"] = r.json.value("seed", std::uint64_t{0});
    Json s = Json::object();
    for (const auto& [k, v] : r.timings) s[k] = v;
    t["seconds"] = s;
    put("timings.json", t.dump(2) + "\n");
  }
  if (format == "all" || format == "csv")
    for (const auto& t : r.tables) put(t.name, t.text());
  if (format == "all" || format == "edges")
    for (const auto& [name, text] : r.edge_lists) put(name, text);
  return written;
}

}  // namespace fillinglab

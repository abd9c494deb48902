#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "fillinglab/budget.hpp"
#include "fillinglab/fixture.hpp"
#include "fillinglab/report.hpp"

using namespace fillinglab;

namespace {

struct Global {
  std::uint64_t seed = 1;
  std::string profile = "desk";
  bool exhaustive = false;
  std::string output;  // file for the JSON result; stdout when empty
};

struct BallArgs {
  std::string fixture = "FIX1";
  std::string slopes = "none";
  std::string model = "comb2";
  std::string kind = "X";
  std::int64_t radius = 4;
  std::string reps;  // "word:periph;word:periph"

  void add(CLI::App* app) {
    app->add_option("--fixture", fixture, "builtin name (FIX1, FIX2, FIX3, ZH) or fixture file")->capture_default_str();
    app->add_option("--slopes", slopes, "filling slopes, ';' between peripherals")->capture_default_str();
    app->add_option("--model", model, "horoball model: comb2, scaled:3, cc:2, cc:e, warped:2")->capture_default_str();
    app->add_option("--kind", kind, "X, X/K, T_G, X/K_W, T_W")->capture_default_str();
    app->add_option("--radius,-r", radius, "ball radius")->capture_default_str();
    app->add_option("--reps", reps, "web centers for X/K_W and T_W, e.g. ':0;y:0'");
  }
  BallRecipe recipe() const {
    BallRecipe r{fixture, slopes, model, kind, radius, {}};
    for (const auto& item : split(reps, ';')) {
      const auto t = trim(item);
      if (t.empty()) continue;
      const auto pos = t.rfind(':');
      if (pos == std::string::npos) throw std::invalid_argument("rep '" + t + "' needs the form word:peripheral");
      r.reps.emplace_back(trim(t.substr(0, pos)), std::stoi(t.substr(pos + 1)));
    }
    return r;
  }
};

void emit(const Global& g, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.output.empty()) {
    std::cout << text;
  } else {
    write_text(g.output, text);
  }
}

SamplePolicy policy_of(const Global& g) {
  SamplePolicy p;
  p.seed = g.seed;
  if (g.exhaustive) p.mode = SamplePolicy::Mode::Exhaustive;
  return p;
}

std::shared_ptr<QuotientContext> quotient_of(const std::string& fixture, const std::string& slopes, std::int64_t certify,
                                             std::uint64_t seed) {
  const auto fx = resolve_fixture(fixture);
  TruncationOptions topt;
  topt.certify_radius = certify;
  topt.seed = seed;
  return std::make_shared<QuotientContext>(fx.ctx, parse_slopes(fx.ctx, slopes), topt);
}

std::vector<double> metric_from_file(const std::string& path, std::size_t* n, std::vector<std::string>* labels = nullptr) {
  const auto j = Json::parse(read_text(path));
  const auto b = boundary_from_json(j);
  *n = b.n;
  if (labels) *labels = b.labels;
  return b.metric;
}

std::vector<double> synthetic_sample(const std::string& spec, std::size_t* n) {
  const auto parts = split(spec, ':');
  const std::string name = parts[0];
  const std::size_t arg = parts.size() > 1 ? std::stoul(parts[1]) : 0;
  if (name == "icosphere") return icosphere_points(static_cast<int>(arg ? arg : 1), n);
  if (name == "circle") {
    *n = arg ? arg : 24;
    return circle_points(*n);
  }
  if (name == "isolated") {
    *n = arg ? arg : 7;
    return isolated_points(*n);
  }
  throw std::invalid_argument("unknown sample '" + spec + "' (icosphere:k, circle:n, isolated:m)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fillinglab: desk experiments on relatively hyperbolic Dehn filling"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  Global g;
  app.add_option("--seed", g.seed, "seed for every sampled computation")->capture_default_str();
  app.add_option("--profile", g.profile, "multiplier profile: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}))
      ->capture_default_str();
  app.add_flag("--exhaustive", g.exhaustive, "never sample");
  app.add_option("--output,-o", g.output, "write the JSON result here instead of stdout");

  // build
  auto* build = app.add_subcommand("build", "enumerate a ball of a cusped space or quotient");
  BallArgs build_args;
  build_args.add(build);
  bool with_edges = false;
  std::string edges_out;
  build->add_flag("--with-edges", with_edges, "include labels and the edge list in the JSON");
  build->add_option("--edges", edges_out, "also write a plain edge list");
  build->callback([&] {
    const auto b = build_ball(build_args.recipe());
    emit(g, ball_json(b.qb.ball, b.recipe.to_json(), with_edges));
    if (!edges_out.empty()) write_text(edges_out, edge_list_text(b.qb.ball));
  });

  // delta
  auto* delta = app.add_subcommand("delta", "four-point and thin-triangle constants of a ball");
  BallArgs delta_args;
  delta_args.add(delta);
  std::string delta_edges;
  std::size_t delta_samples = 200000;
  delta->add_option("--edges", delta_edges, "measure an edge-list file instead of building a ball");
  delta->add_option("--samples", delta_samples, "samples above the exhaustive threshold")->capture_default_str();
  delta->callback([&] {
    const auto ball = delta_edges.empty() ? build_ball(delta_args.recipe()).qb.ball
                                          : ball_from_edge_list(read_text(delta_edges));
    auto p = policy_of(g);
    p.samples = delta_samples;
    emit(g, {{"kind", "delta"},
             {"vertices", ball.size()},
             {"four_point", to_json(four_point_delta(ball, p))},
             {"thin_triangle", to_json(thin_triangle_delta(ball, p))}});
  });

  // truncate
  auto* truncate = app.add_subcommand("truncate", "truncation depth of peripheral quotients");
  std::string tr_fixture = "FIX2", tr_slopes = "none";
  std::int64_t tr_certify = 32;
  truncate->add_option("--fixture", tr_fixture)->capture_default_str();
  truncate->add_option("--slopes", tr_slopes)->required();
  truncate->add_option("--certify", tr_certify, "word-metric radius of the tested Γ-ball")->capture_default_str();
  truncate->callback([&] {
    const auto q = quotient_of(tr_fixture, tr_slopes, tr_certify, g.seed);
    Json arr = Json::array();
    for (int i : q->quotient().peripheral()) {
      Json e = to_json(q->truncation(i));
      e["factor"] = i;
      e["quotient_kind"] = to_string(q->filling().kind(i));
      arr.push_back(e);
    }
    emit(g, {{"kind", "truncation"}, {"peripherals", arr}});
  });

  // fill
  auto* fill = app.add_subcommand("fill", "quotient description and the ball embedding check");
  std::string fi_fixture = "FIX1", fi_slopes;
  std::int64_t fi_radius = 2;
  fill->add_option("--fixture", fi_fixture)->capture_default_str();
  fill->add_option("--slopes", fi_slopes)->required();
  fill->add_option("--radius,-r", fi_radius, "embedding radius")->capture_default_str();
  fill->callback([&] {
    const auto q = quotient_of(fi_fixture, fi_slopes, 32, g.seed);
    CuspedSpace xs(q->base());
    const auto girth = q->filling().girth();
    emit(g, {{"kind", "fill"},
             {"quotient", q->quotient().describe()},
             {"girth", girth ? Json(*girth) : Json(nullptr)},
             {"embedding", to_json(ball_embedding_check(*q, fi_radius), q->base(), xs)}});
  });

  // greendlinger
  auto* gr = app.add_subcommand("greendlinger", "shortening loop for a kernel word");
  std::string gr_fixture = "FIX1", gr_slopes, gr_word, gr_base;
  std::int64_t gr_depth = -1;
  gr->add_option("--fixture", gr_fixture)->capture_default_str();
  gr->add_option("--slopes", gr_slopes)->required();
  gr->add_option("--word", gr_word, "kernel element, e.g. 'y x^8 y^-1'")->required();
  gr->add_option("--basepoint", gr_base, "basepoint word (identity by default)");
  gr->add_option("--depth", gr_depth, "horoball depth A_c starts at (profile value by default)");
  gr->callback([&] {
    const auto q = quotient_of(gr_fixture, gr_slopes, 32, g.seed);
    const auto& ctx = q->base();
    const auto word = ctx.parse_word(gr_word);
    if (!q->filling().kernel_contains(word)) throw std::invalid_argument("'" + gr_word + "' is not in the kernel");
    const auto depth = gr_depth >= 0 ? gr_depth : make_profile(g.profile).greendlinger_depth;
    const auto run = greendlinger_loop(*q, word, ctx.parse_word(gr_base), depth);
    CuspedSpace xs(ctx);
    Json j = to_json(run, xs, ctx);
    j["kind"] = "greendlinger";
    j["depth"] = depth;
    emit(g, j);
  });

  // spiderweb
  auto* sw = app.add_subcommand("spiderweb", "build spiderwebs and verify their axioms");
  std::string sw_fixture = "FIX1", sw_slopes;
  std::int64_t sw_radius = 6, sw_margin = 2;
  std::size_t sw_gens = 5;
  sw->add_option("--fixture", sw_fixture)->capture_default_str();
  sw->add_option("--slopes", sw_slopes)->required();
  sw->add_option("--radius,-r", sw_radius, "working ball radius")->capture_default_str();
  sw->add_option("--generations", sw_gens)->capture_default_str();
  sw->add_option("--margin", sw_margin, "axiom margin")->capture_default_str();
  sw->callback([&] {
    Scenario sc;
    sc.fixture = sw_fixture;
    sc.slopes = sw_slopes;
    sc.spider_radius = sw_radius;
    sc.generations = sw_gens;
    sc.axiom_margin = sw_margin;
    sc.profile = g.profile;
    sc.seed = g.seed;
    sc.stages = {"spiderweb"};
    if (g.profile == "paper") sc.stages.insert(sc.stages.begin(), "delta");
    auto r = run_scenario(sc);
    emit(g, r.json["stages"]["spiderweb"]);
  });

  // boundary
  auto* bd = app.add_subcommand("boundary", "sphere approximation with the visual quasimetric");
  BallArgs bd_args;
  bd_args.add(bd);
  std::int64_t bd_sphere = 2;
  double bd_eps = 0;
  bool bd_lc = false;
  bd->add_option("--sphere-radius", bd_sphere, "sphere radius (the ball is built at twice this)")->capture_default_str();
  bd->add_option("--epsilon", bd_eps, "visual parameter (default: from the measured thin-triangle constant)");
  bd->add_flag("--linear-connectedness", bd_lc, "also run the chain search");
  bd->callback([&] {
    auto recipe = bd_args.recipe();
    recipe.radius = 2 * bd_sphere;
    const auto b = build_ball(recipe);
    double eps = bd_eps;
    if (eps <= 0) eps = auto_epsilon(thin_triangle_delta(b.qb.ball, policy_of(g)).delta_thin);
    auto a = sphere_approx(b.qb.ball, bd_sphere, eps);
    if (b.qb.space) mark_peripheral(a, b.qb.ball, *b.qb.space);
    const auto m = chain_metric(a);
    std::optional<ChainReport> lc;
    if (bd_lc) lc = linear_connectedness(m.table, a.size());
    Json j = boundary_json(a, m, lc);
    j["recipe"] = recipe.to_json();
    emit(g, j);
  });

  // gh
  auto* gh = app.add_subcommand("gh", "weak Gromov-Hausdorff estimate between two boundary exports");
  std::string gh_a, gh_b;
  GHOptions gh_opt;
  gh->add_option("a", gh_a, "boundary JSON (source)")->required()->check(CLI::ExistingFile);
  gh->add_option("b", gh_b, "boundary JSON (target)")->required()->check(CLI::ExistingFile);
  gh->add_option("--lambda", gh_opt.lambda, "multiplicative constant")->capture_default_str();
  gh->add_option("--sweeps", gh_opt.sweeps)->capture_default_str();
  gh->callback([&] {
    std::size_t na = 0, nb = 0;
    const auto a = metric_from_file(gh_a, &na);
    const auto b = metric_from_file(gh_b, &nb);
    gh_opt.seed = g.seed;
    Json j = to_json(weak_gh_estimate(a, na, b, nb, gh_opt), true);
    j["kind"] = "gh";
    j["source_points"] = na;
    j["target_points"] = nb;
    emit(g, j);
  });

  // topology
  auto* tp = app.add_subcommand("topology", "Rips Betti numbers over GF(2) across scales");
  std::string tp_boundary, tp_sample, tp_scales = "auto";
  std::size_t tp_points = 80;
  auto* tp_src = tp->add_option("--boundary", tp_boundary, "boundary JSON")->check(CLI::ExistingFile);
  tp->add_option("--sample", tp_sample, "synthetic sample: icosphere:1, circle:24, isolated:7")->excludes(tp_src);
  tp->add_option("--scales", tp_scales, "a:b:step, a comma list, or auto")->capture_default_str();
  tp->add_option("--max-points", tp_points, "farthest-point subsample size")->capture_default_str();
  tp->callback([&] {
    std::size_t n = 0;
    std::vector<double> d;
    if (!tp_boundary.empty()) d = metric_from_file(tp_boundary, &n);
    else if (!tp_sample.empty()) d = synthetic_sample(tp_sample, &n);
    else throw std::invalid_argument("give --boundary or --sample");
    std::vector<double> grid;
    if (tp_scales == "auto") {
      double lo = 0, hi = 0;
      for (std::size_t i = 0; i < n * n; ++i)
        if (d[i] > 0) {
          lo = lo == 0 ? d[i] : std::min(lo, d[i]);
          hi = std::max(hi, d[i]);
        }
      for (int k = 0; k <= 12 && lo > 0; ++k) grid.push_back(lo * std::pow(hi / lo, k / 12.0));
    } else {
      grid = parse_scale_grid(tp_scales);
    }
    Json j = to_json(betti_profile(d, n, grid, tp_points, g.seed));
    j["kind"] = "topology";
    emit(g, j);
  });

  // run / export
  auto* run = app.add_subcommand("run", "run a scenario file through every stage");
  std::string run_cfg, run_dir;
  run->add_option("config", run_cfg, "scenario key-value file")->required()->check(CLI::ExistingFile);
  run->add_option("--dir", run_dir, "export every format into this directory");
  run->callback([&] {
    auto sc = Scenario::load(run_cfg);
    if (app.count("--seed")) sc.seed = g.seed;
    if (app.count("--profile")) sc.profile = g.profile;
    if (g.exhaustive) sc.exhaustive = true;
    const auto r = run_scenario(sc);
    if (!run_dir.empty()) {
      for (const auto& p : export_report(r, run_dir, "all")) std::cerr << "wrote " << p.string() << "\n";
    }
    emit(g, r.json);
  });

  auto* ex = app.add_subcommand("export", "run a scenario and write one export format");
  std::string ex_cfg, ex_dir, ex_format = "all";
  ex->add_option("config", ex_cfg, "scenario key-value file")->required()->check(CLI::ExistingFile);
  ex->add_option("--dir", ex_dir, "output directory")->required();
  ex->add_option("--format", ex_format)->check(CLI::IsMember({"all", "json", "csv", "edges"}))->capture_default_str();
  ex->callback([&] {
    auto sc = Scenario::load(ex_cfg);
    if (app.count("--seed")) sc.seed = g.seed;
    if (app.count("--profile")) sc.profile = g.profile;
    if (g.exhaustive) sc.exhaustive = true;
    for (const auto& p : export_report(run_scenario(sc), ex_dir, ex_format)) std::cout << p.string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "fillinglab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "fillinglab/util.hpp"

namespace fillinglab {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

double BoundaryApprox::rho(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return std::exp(-epsilon * static_cast<double>(product2[i * size() + j]) / static_cast<double>(2 * unit));
}

std::vector<double> BoundaryApprox::rho_table() const {
  const std::size_t n = size();
  std::vector<double> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i * n + j] = rho(i, j);
  return t;
}

BoundaryApprox sphere_approx(const BallSnapshot& ball, std::int64_t radius, double epsilon, int basepoint) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (radius < 0) throw std::invalid_argument("sphere radius must be nonnegative");
  BoundaryApprox a;
  a.basepoint = basepoint < 0 ? ball.center() : basepoint;
  a.radius = radius;
  a.epsilon = epsilon;
  a.unit = ball.unit();
  a.source = ball.model_name();
  const auto wrow = ball.row(a.basepoint);
  const std::int64_t target = radius * a.unit;
  for (std::size_t v = 0; v < ball.size(); ++v) {
    if ((*wrow)[v] != target) continue;
    a.ball_index.push_back(static_cast<int>(v));
    a.labels.push_back(ball.label(static_cast<int>(v)));
    if (ball.has_vertices()) a.vertices.push_back(ball.vertex(static_cast<int>(v)));
  }
  if (a.ball_index.empty()) throw std::invalid_argument("empty sphere: ball too small for the sphere radius");
  const std::size_t n = a.size();
  a.product2.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = ball.row(a.ball_index[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t d = (*r)[a.ball_index[j]];
      if (d >= BallSnapshot::kInf) throw std::runtime_error("sphere points are disconnected in the ball");
      if (j > i && !ball.certified(a.ball_index[i], a.ball_index[j])) ++a.uncertified;
      a.product2[i * n + j] = 2 * target - d;
    }
  }
  a.marking.assign(n, -1);
  return a;
}

double auto_epsilon(Rational delta) {
  const double d = std::max(delta.to_double(), 0.5);
  return 1.0 / (6.0 * d);
}

ChainMetric chain_metric(const std::vector<double>& rho, std::size_t n) {
  if (rho.size() != n * n) throw std::invalid_argument("table size mismatch");
  ChainMetric m;
  m.n = n;
  m.table = rho;
  for (std::size_t i = 0; i < n; ++i) m.table[i * n + i] = 0;
  auto& d = m.table;
  for (bool changed = true; changed;) {
    changed = false;
    ++m.passes;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const double dik = d[i * n + k];
        for (std::size_t j = 0; j < n; ++j) {
          const double via = dik + d[k * n + j];
          if (via < d[i * n + j]) {
            d[i * n + j] = via;
            changed = true;
          }
        }
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && d[i * n + j] > 0) m.kappa_hat = std::max(m.kappa_hat, rho[i * n + j] / d[i * n + j]);
  m.triangle_ok = satisfies_triangle(d, n);
  return m;
}

ChainMetric chain_metric(const BoundaryApprox& a) { return chain_metric(a.rho_table(), a.size()); }

bool satisfies_triangle(const std::vector<double>& d, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i * n + j] > d[i * n + k] + d[k * n + j]) return false;
  return true;
}

double chain_diameter(const std::vector<double>& d, std::size_t n, const std::vector<std::size_t>& chain) {
  double diam = 0;
  for (auto a : chain)
    for (auto b : chain) diam = std::max(diam, d[a * n + b]);
  return diam;
}

namespace {

// Adds points in increasing `key` order until p and q are joined by steps
// <= step, then returns a fewest-hop chain among the added points.
std::optional<std::vector<std::size_t>> chain_by_key(const std::vector<double>& d, std::size_t n, std::size_t p,
                                                     std::size_t q, double step, const std::vector<double>& key) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key[a] < key[b]; });
  UnionFind uf(n);
  std::vector<char> added(n, 0);
  std::size_t used = 0;
  bool joined = false;
  while (used < n && !joined) {
    const double level = key[order[used]];
    // all points with the same key enter together
    std::size_t end = used;
    while (end < n && key[order[end]] == level) ++end;
    for (std::size_t k = used; k < end; ++k) {
      const auto z = order[k];
      added[z] = 1;
      for (std::size_t w = 0; w < n; ++w)
        if (added[w] && d[z * n + w] <= step) uf.unite(static_cast<int>(z), static_cast<int>(w));
    }
    used = end;
    joined = added[p] && added[q] && uf.find(static_cast<int>(p)) == uf.find(static_cast<int>(q));
  }
  if (!joined) return std::nullopt;
  std::vector<int> prev(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> queue{p};
  seen[p] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto z = queue[h];
    if (z == q) break;
    for (std::size_t w = 0; w < n; ++w) {
      if (!added[w] || seen[w] || d[z * n + w] > step) continue;
      seen[w] = 1;
      prev[w] = static_cast<int>(z);
      queue.push_back(w);
    }
  }
  std::vector<std::size_t> chain;
  for (int z = static_cast<int>(q); z != -1; z = prev[z]) chain.push_back(static_cast<std::size_t>(z));
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace

ChainReport linear_connectedness(const std::vector<double>& d, std::size_t n, double floor, std::size_t witness_cap) {
  if (n < 2) throw std::invalid_argument("linear connectedness needs at least two points");
  ChainReport rep;
  if (floor < 0) {
    floor = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double nn = kInfD;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) nn = std::min(nn, d[i * n + j]);
      floor = std::max(floor, nn);
    }
  }
  rep.floor = floor;
  std::vector<double> lens(n), from_p(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double dpq = d[p * n + q];
      if (dpq < 2 * floor || dpq <= 0) {
        ++rep.below_floor;
        continue;
      }
      ++rep.pairs;
      for (std::size_t z = 0; z < n; ++z) {
        from_p[z] = d[p * n + z];
        lens[z] = std::max(d[p * n + z], d[q * n + z]);
      }
      std::optional<std::vector<std::size_t>> best;
      double best_diam = kInfD;
      for (const auto* key : {&lens, &from_p}) {
        auto c = chain_by_key(d, n, p, q, dpq / 2, *key);
        if (!c) continue;
        const double diam = chain_diameter(d, n, *c);
        if (diam < best_diam) {
          best_diam = diam;
          best = std::move(c);
        }
      }
      if (!best) {
        if (!rep.disconnected) {
          rep.worst_p = p;
          rep.worst_q = q;
          rep.worst_chain.clear();
        }
        rep.disconnected = true;
        rep.L = kInfD;
        continue;
      }
      const double ratio = best_diam / dpq;
      if (!rep.disconnected && ratio > rep.L) {
        rep.L = ratio;
        rep.worst_p = p;
        rep.worst_q = q;
        rep.worst_chain = *best;
      }
      if (rep.witnesses.size() < witness_cap) rep.witnesses.push_back(std::move(*best));
    }
  }
  return rep;
}

void mark_peripheral(BoundaryApprox& a, const BallSnapshot& ball, const CuspedSpace& space) {
  (void)ball;
  const std::size_t n = a.size();
  a.marking.assign(n, -1);
  a.components.clear();
  if (a.vertices.size() != n) throw std::invalid_argument("marking needs a ball of cusped vertices");
  std::unordered_map<std::string, int> ids;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = a.vertices[i];
    if (v.is_cayley()) continue;
    const Center c = space.center_of(v);
    const std::int64_t cap = space.depth_cap(c);
    if (cap == kNoCap || cap < 1 || v.depth != cap) continue;
    const std::string name = space.format(c);
    auto [it, fresh] = ids.emplace(name, static_cast<int>(a.components.size()));
    if (fresh) a.components.push_back(name);
    a.marking[i] = it->second;
  }
  // Δ with e^{-eps (R - Δ)} = the largest distance from a tagged point to
  // the nearest untagged one.
  double worst = 0;
  bool any_tagged = false, any_free = false;
  for (std::size_t i = 0; i < n; ++i) (a.marking[i] < 0 ? any_free : any_tagged) = true;
  if (!any_tagged) {
    a.density_delta = 0;
    return;
  }
  if (!any_free) {
    a.density_delta = kInfD;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a.marking[i] < 0) continue;
    double nearest = kInfD;
    for (std::size_t j = 0; j < n; ++j)
      if (a.marking[j] < 0) nearest = std::min(nearest, a.rho(i, j));
    worst = std::max(worst, nearest);
  }
  a.density_delta = static_cast<double>(a.radius) + std::log(worst) / a.epsilon;
}

StrongConvergenceReport strong_convergence_check(const QuotientBall& a, const QuotientBall& b, std::int64_t radius) {
  StrongConvergenceReport rep;
  rep.radius = radius;
  const auto& ba = a.ball;
  const auto& bb = b.ball;
  if (ba.unit() != bb.unit()) throw std::invalid_argument("balls use different models");
  if (ba.radius() < 2 * radius * ba.unit() || bb.radius() < 2 * radius * bb.unit())
    throw std::invalid_argument("strong convergence needs balls of radius >= 2R");
  const std::int64_t r = radius * ba.unit();
  std::vector<int> in_a, in_b;
  for (std::size_t i = 0; i < ba.size(); ++i)
    if (ba.center_distance(static_cast<int>(i)) <= r) in_a.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < bb.size(); ++i)
    if (bb.center_distance(static_cast<int>(i)) <= r) in_b.push_back(static_cast<int>(i));
  rep.vertices = in_a.size();
  std::vector<int> image(in_a.size());
  std::vector<char> hit(bb.size(), 0);
  for (std::size_t k = 0; k < in_a.size(); ++k) {
    const auto& v = ba.vertex(in_a[k]);
    const auto idx = bb.index_of(b.project(v));
    if (!idx || bb.center_distance(*idx) > r) {
      rep.isometric = false;
      rep.failure = "image leaves the ball";
      rep.witness = {v};
      return rep;
    }
    if (hit[*idx]) {
      rep.isometric = false;
      rep.failure = "not injective";
      rep.witness = {v};
      return rep;
    }
    hit[*idx] = 1;
    image[k] = *idx;
  }
  if (in_a.size() != in_b.size()) {
    rep.isometric = false;
    rep.failure = "not surjective";
    for (int j : in_b)
      if (!hit[j]) {
        rep.witness = {bb.vertex(j)};
        break;
      }
    return rep;
  }
  for (std::size_t k = 0; k < in_a.size(); ++k) {
    const auto ra = ba.row(in_a[k]);
    const auto rb = bb.row(image[k]);
    for (std::size_t l = k + 1; l < in_a.size(); ++l) {
      if ((*ra)[in_a[l]] != (*rb)[image[l]]) {
        rep.isometric = false;
        rep.failure = "distance changes";
        rep.witness = {ba.vertex(in_a[k]), ba.vertex(in_a[l])};
        return rep;
      }
    }
  }
  return rep;
}

double qi_defect(const std::vector<double>& a, std::size_t na, const std::vector<double>& b, std::size_t nb,
                 const std::vector<int>& f, double lambda, double* distortion, double* coverage) {
  double dist = 0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = i + 1; j < na; ++j) {
      const double da = a[i * na + j];
      const double db = b[static_cast<std::size_t>(f[i]) * nb + static_cast<std::size_t>(f[j])];
      dist = std::max({dist, db - lambda * da, da / lambda - db});
    }
  double cov = 0;
  for (std::size_t y = 0; y < nb; ++y) {
    double nearest = kInfD;
    for (std::size_t i = 0; i < na; ++i) nearest = std::min(nearest, b[y * nb + static_cast<std::size_t>(f[i])]);
    cov = std::max(cov, nearest);
  }
  if (distortion) *distortion = dist;
  if (coverage) *coverage = cov;
  return std::max(dist, cov);
}

double gh_lower_bound(const std::vector<double>& a, std::size_t na, const std::vector<double>& b, std::size_t nb,
                      double lambda, std::string* reason) {
  auto diam = [](const std::vector<double>& d) { return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end()); };
  auto sep = [](const std::vector<double>& d, std::size_t n) {
    double s = kInfD;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s = std::min(s, d[i * n + j]);
    return s;
  };
  const double da = diam(a), db = diam(b);
  double best = 0;
  std::string why = "none";
  auto offer = [&](double v, const char* name) {
    if (v > best) {
      best = v;
      why = name;
    }
  };
  offer((db - lambda * da) / 3, "diameter of B");
  offer(da / lambda - db, "diameter of A");
  if (na < nb) offer(sep(b, nb) / 2, "cardinality (B has more points)");
  if (na > nb) offer(sep(a, na) / lambda, "cardinality (A has more points)");
  if (reason) *reason = why;
  return best;
}

GHReport weak_gh_estimate(const std::vector<double>& a, std::size_t na, const std::vector<double>& b, std::size_t nb,
                          const GHOptions& opt) {
  if (na == 0 || nb == 0) throw std::invalid_argument("empty metric space");
  if (opt.lambda < 1) throw std::invalid_argument("lambda must be >= 1");
  const double lambda = opt.lambda;
  GHReport rep;
  rep.lambda = lambda;
  rep.seed = opt.seed;
  auto term = [&](std::size_t i, int fi, std::size_t j, int fj) {
    const double da = a[i * na + j];
    const double db = b[static_cast<std::size_t>(fi) * nb + static_cast<std::size_t>(fj)];
    return std::max({0.0, db - lambda * da, da / lambda - db});
  };

  std::vector<int> f(na, -1);
  if (!opt.initial.empty()) {
    if (opt.initial.size() != na) throw std::invalid_argument("initial map has the wrong size");
    for (std::size_t i = 0; i < na; ++i)
      if (opt.initial[i] >= 0 && static_cast<std::size_t>(opt.initial[i]) < nb) f[i] = opt.initial[i];
  }
  // Greedy fill in farthest-point order.
  {
    std::vector<double> ecc_a(na, 0), ecc_b(nb, 0);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < na; ++j) ecc_a[i] = std::max(ecc_a[i], a[i * na + j]);
    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t j = 0; j < nb; ++j) ecc_b[i] = std::max(ecc_b[i], b[i * nb + j]);
    std::vector<std::size_t> order;
    std::vector<char> placed(na, 0);
    std::vector<double> gap(na, kInfD);
    for (std::size_t i = 0; i < na; ++i)
      if (f[i] >= 0) {
        placed[i] = 1;
        order.push_back(i);
      }
    for (std::size_t step = order.size(); step < na; ++step) {
      std::size_t next = 0;
      double far = -1;
      for (std::size_t i = 0; i < na; ++i) {
        if (placed[i]) continue;
        double g = kInfD;
        for (auto o : order) g = std::min(g, a[i * na + o]);
        if (order.empty()) g = 0;
        if (g > far) {
          far = g;
          next = i;
        }
      }
      int best = 0;
      double best_cost = kInfD;
      for (std::size_t y = 0; y < nb; ++y) {
        double cost = 0;
        if (order.empty()) {
          cost = std::abs(ecc_a[next] - ecc_b[y]);
        } else {
          for (auto o : order) cost = std::max(cost, term(next, static_cast<int>(y), o, f[o]));
        }
        if (cost < best_cost) {
          best_cost = cost;
          best = static_cast<int>(y);
        }
      }
      f[next] = best;
      placed[next] = 1;
      order.push_back(next);
    }
  }

  // Local search over single reassignments, (eps, local sum) lexicographic.
  Sampler rng(opt.seed);
  double cur = qi_defect(a, na, b, nb, f, lambda);
  for (std::size_t sweep = 0; sweep < opt.sweeps && cur > 0; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < na; ++i) {
      // distortion over pairs avoiding i
      double rest = 0;
      for (std::size_t u = 0; u < na; ++u) {
        if (u == i) continue;
        for (std::size_t v = u + 1; v < na; ++v)
          if (v != i) rest = std::max(rest, term(u, f[u], v, f[v]));
      }
      // nearest image to each y among points other than i
      std::vector<double> cover_rest(nb, kInfD);
      for (std::size_t y = 0; y < nb; ++y)
        for (std::size_t u = 0; u < na; ++u)
          if (u != i) cover_rest[y] = std::min(cover_rest[y], b[y * nb + static_cast<std::size_t>(f[u])]);
      auto evaluate = [&](int y0, double* local) {
        double row = 0, sum = 0;
        for (std::size_t u = 0; u < na; ++u) {
          if (u == i) continue;
          const double t = term(i, y0, u, f[u]);
          row = std::max(row, t);
          sum += t;
        }
        double cov = 0;
        for (std::size_t y = 0; y < nb; ++y)
          cov = std::max(cov, std::min(cover_rest[y], b[y * nb + static_cast<std::size_t>(y0)]));
        *local = sum;
        return std::max({rest, row, cov});
      };
      double cur_local = 0;
      const double cur_eps = evaluate(f[i], &cur_local);
      std::vector<int> cand;
      {
        std::vector<int> byd(nb);
        std::iota(byd.begin(), byd.end(), 0);
        const auto fi = static_cast<std::size_t>(f[i]);
        std::stable_sort(byd.begin(), byd.end(),
                         [&](int p, int q) { return b[fi * nb + static_cast<std::size_t>(p)] < b[fi * nb + static_cast<std::size_t>(q)]; });
        const std::size_t near = std::min<std::size_t>(nb, opt.candidates);
        cand.assign(byd.begin(), byd.begin() + static_cast<std::ptrdiff_t>(near));
        for (std::size_t k = 0; k < opt.candidates / 2 && nb > near; ++k) cand.push_back(static_cast<int>(rng.below(nb)));
      }
      int best = f[i];
      double best_eps = cur_eps, best_local = cur_local;
      for (int y : cand) {
        if (y == f[i]) continue;
        double local = 0;
        const double e = evaluate(y, &local);
        if (e < best_eps - 1e-12 || (e <= best_eps + 1e-12 && local < best_local - 1e-12)) {
          best = y;
          best_eps = e;
          best_local = local;
        }
      }
      if (best != f[i]) {
        f[i] = best;
        improved = true;
        ++rep.improvements;
      }
    }
    cur = qi_defect(a, na, b, nb, f, lambda);
    if (!improved) break;
  }
  rep.map = f;
  rep.epsilon = qi_defect(a, na, b, nb, f, lambda, &rep.distortion, &rep.coverage);
  rep.lower_bound = gh_lower_bound(a, na, b, nb, lambda, &rep.lower_bound_reason);
  return rep;
}

std::vector<int> provenance_map(const BoundaryApprox& a, const BoundaryApprox& b,
                                const std::function<CuspedVertex(const CuspedVertex&)>& project) {
  if (a.vertices.size() != a.size() || b.vertices.size() != b.size())
    throw std::invalid_argument("provenance needs cusped vertices on both sides");
  VertexMap<int> where;
  for (std::size_t j = 0; j < b.size(); ++j) where.emplace(b.vertices[j], static_cast<int>(j));
  std::vector<int> f(a.size(), -1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = where.find(project(a.vertices[i]));
    if (it != where.end()) f[i] = it->second;
  }
  return f;
}

ProjectionDistortion projection_distortion(const BallSnapshot& ball, std::int64_t r, std::int64_t r_outer,
                                           double epsilon) {
  if (ball.weighted()) throw std::invalid_argument("projection distortion needs an unweighted ball");
  if (!(0 <= r && r < r_outer)) throw std::invalid_argument("need 0 <= R < R'");
  const int w = ball.center();
  std::vector<int> outer, proj;
  for (std::size_t v = 0; v < ball.size(); ++v)
    if (ball.center_distance(static_cast<int>(v)) == r_outer) outer.push_back(static_cast<int>(v));
  if (outer.empty()) throw std::invalid_argument("empty outer sphere");
  for (int x : outer) proj.push_back(ball.canonical_geodesic(w, x)[static_cast<std::size_t>(r)]);
  ProjectionDistortion out;
  out.points = outer.size();
  auto rho = [&](std::int64_t rad, std::int64_t d) { return std::exp(-epsilon * static_cast<double>(2 * rad - d) / 2.0); };
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const auto ro = ball.row(outer[i]);
    const auto rp = ball.row(proj[i]);
    for (std::size_t j = i + 1; j < outer.size(); ++j) {
      const double big = rho(r_outer, (*ro)[outer[j]]);
      const double small = proj[i] == proj[j] ? 0.0 : rho(r, (*rp)[proj[j]]);
      out.additive = std::max(out.additive, std::abs(small - big));
      if (proj[i] != proj[j]) out.multiplicative = std::max({out.multiplicative, small / big, big / small});
    }
  }
  return out;
}

}  // namespace fillinglab

#include "fillinglab/hyperbolicity.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace fillinglab {

namespace {

std::vector<int> candidate_set(const BallSnapshot& ball, const SamplePolicy& policy) {
  if (!policy.subset.empty()) return policy.subset;
  std::vector<int> all(ball.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return all;
}

bool use_exhaustive(const SamplePolicy& p, std::size_t n) {
  if (p.mode == SamplePolicy::Mode::Exhaustive) return true;
  if (p.mode == SamplePolicy::Mode::Sampled) return false;
  return n <= p.exhaustive_threshold;
}

// Dense distance and certification tables restricted to `pts`.
struct LocalTable {
  std::size_t n = 0;
  std::vector<std::int32_t> d;
  std::vector<char> ok;
};

LocalTable local_table(const BallSnapshot& ball, const std::vector<int>& pts) {
  LocalTable t;
  t.n = pts.size();
  t.d.assign(t.n * t.n, 0);
  t.ok.assign(t.n * t.n, 0);
  parallel_chunks(t.n, std::min<std::size_t>(t.n, 64), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto r = ball.row(pts[i]);
      for (std::size_t j = 0; j < t.n; ++j) {
        t.d[i * t.n + j] = (*r)[pts[j]];
        t.ok[i * t.n + j] = ball.certified(pts[i], pts[j]);
      }
    }
  });
  return t;
}

inline std::int64_t slack(std::int64_t s1, std::int64_t s2, std::int64_t s3) {
  const std::int64_t hi = std::max({s1, s2, s3});
  const std::int64_t lo = std::min({s1, s2, s3});
  const std::int64_t mid = s1 + s2 + s3 - hi - lo;
  return hi - mid;
}

}  // namespace

Rational four_point_theta_table(const std::vector<std::int32_t>& table, std::size_t n, const std::vector<int>& anchors,
                                std::vector<int>* witness) {
  std::int64_t best = 0;
  std::vector<int> wit;
  auto scan_first = [&](int a, bool ordered) {
    const std::int32_t* ra = &table[a * n];
    for (std::size_t b = ordered ? a + 1 : 0; b < n; ++b) {
      if (static_cast<int>(b) == a) continue;
      const std::int32_t* rb = &table[b * n];
      const std::int64_t dab = ra[b];
      for (std::size_t c = b + 1; c < n; ++c) {
        if (static_cast<int>(c) == a) continue;
        const std::int32_t* rc = &table[c * n];
        const std::int64_t dac = ra[c], dbc = rb[c];
        for (std::size_t d = c + 1; d < n; ++d) {
          if (static_cast<int>(d) == a) continue;
          const std::int64_t s = slack(dab + rc[d], dac + rb[d], ra[d] + dbc);
          if (s > best) {
            best = s;
            wit = {a, static_cast<int>(b), static_cast<int>(c), static_cast<int>(d)};
          }
        }
      }
    }
  };
  if (anchors.empty()) {
    for (std::size_t a = 0; a < n; ++a) scan_first(static_cast<int>(a), true);
  } else {
    for (int a : anchors) scan_first(a, false);
  }
  if (witness) *witness = wit;
  return Rational(best, 2);
}

HyperbolicityReport four_point_delta(const BallSnapshot& ball, const SamplePolicy& policy) {
  HyperbolicityReport rep;
  rep.seed = policy.seed;
  const std::int64_t unit = ball.unit();
  if (policy.use_certificates && policy.subset.empty() && !ball.weighted() && is_block_graph(ball)) {
    rep.policy = "certificate:block-graph";
    rep.exhaustive = true;
    return rep;
  }
  const auto pts = candidate_set(ball, policy);
  const std::size_t n = pts.size();
  if (n < 4) {
    rep.policy = "exhaustive";
    rep.exhaustive = true;
    return rep;
  }
  std::int64_t best = 0;
  if (use_exhaustive(policy, n)) {
    rep.policy = "exhaustive";
    rep.exhaustive = true;
    LocalTable t = local_table(ball, pts);
    const bool all_ok = std::all_of(t.ok.begin(), t.ok.end(), [](char c) { return c != 0; });
    std::vector<int> anchor_pos;
    for (int a : policy.anchors) {
      auto it = std::find(pts.begin(), pts.end(), a);
      if (it != pts.end()) anchor_pos.push_back(static_cast<int>(it - pts.begin()));
    }
    if (all_ok) {
      std::vector<int> wit;
      Rational th = four_point_theta_table(t.d, n, anchor_pos, &wit);
      best = th.num() * (2 / th.den());
      for (int& w : wit) w = pts[w];
      rep.witness = wit;
      rep.tested = anchor_pos.empty() ? n * (n - 1) * (n - 2) * (n - 3) / 24
                                      : anchor_pos.size() * (n - 1) * (n - 2) * (n - 3) / 6;
    } else {
      auto ok = [&](std::size_t i, std::size_t j) { return t.ok[i * n + j] != 0; };
      auto dd = [&](std::size_t i, std::size_t j) -> std::int64_t { return t.d[i * n + j]; };
      std::vector<int> firsts;
      if (anchor_pos.empty()) {
        for (std::size_t a = 0; a < n; ++a) firsts.push_back(static_cast<int>(a));
      } else {
        firsts = anchor_pos;
      }
      for (int a : firsts) {
        for (std::size_t b = anchor_pos.empty() ? a + 1 : 0; b < n; ++b) {
          if (static_cast<int>(b) == a || !ok(a, b)) continue;
          for (std::size_t c = b + 1; c < n; ++c) {
            if (static_cast<int>(c) == a || !ok(a, c) || !ok(b, c)) continue;
            for (std::size_t d = c + 1; d < n; ++d) {
              if (static_cast<int>(d) == a || !ok(a, d) || !ok(b, d) || !ok(c, d)) continue;
              ++rep.tested;
              const std::int64_t s = slack(dd(a, b) + dd(c, d), dd(a, c) + dd(b, d), dd(a, d) + dd(b, c));
              if (s > best) {
                best = s;
                rep.witness = {pts[a], pts[b], pts[c], pts[d]};
              }
            }
          }
        }
      }
    }
  } else {
    rep.policy = "sampled";
    Sampler rng(policy.seed);
    const std::uint64_t attempts = policy.samples * 8;
    for (std::uint64_t k = 0; k < attempts && rep.tested < policy.samples; ++k) {
      int q[4];
      for (int& x : q) x = pts[rng.below(n)];
      if (q[0] == q[1] || q[0] == q[2] || q[0] == q[3] || q[1] == q[2] || q[1] == q[3] || q[2] == q[3]) continue;
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i)
        for (int j = i + 1; j < 4 && ok; ++j) ok = ball.certified(q[i], q[j]);
      if (!ok) continue;
      ++rep.tested;
      auto ra = ball.row(q[0]), rb = ball.row(q[1]), rc = ball.row(q[2]);
      const std::int64_t s = slack((*ra)[q[1]] + (*rc)[q[3]], (*ra)[q[2]] + (*rb)[q[3]], (*ra)[q[3]] + (*rb)[q[2]]);
      if (s > best) {
        best = s;
        rep.witness = {q[0], q[1], q[2], q[3]};
      }
    }
  }
  rep.theta_4pt = Rational(best, 2 * unit);
  return rep;
}

HyperbolicityReport thin_triangle_delta(const BallSnapshot& ball, const SamplePolicy& policy) {
  if (ball.weighted()) throw std::invalid_argument("thin-triangle estimate needs an unweighted ball");
  HyperbolicityReport rep;
  rep.seed = policy.seed;
  if (policy.use_certificates && policy.subset.empty() && is_tree(ball)) {
    rep.policy = "certificate:tree";
    rep.exhaustive = true;
    return rep;
  }
  const auto pts = candidate_set(ball, policy);
  const std::size_t n = pts.size();
  std::map<std::pair<int, int>, std::vector<int>> sides;
  auto side = [&](int u, int v) -> const std::vector<int>& {
    auto key = std::minmax(u, v);
    auto it = sides.find(key);
    if (it == sides.end()) it = sides.emplace(key, ball.canonical_geodesic(key.first, key.second)).first;
    return it->second;
  };
  // Point at distance t from `from` along the side joining from and to.
  auto along = [&](const std::vector<int>& s, int from, std::int64_t t) {
    return s.front() == from ? s[t] : s[s.size() - 1 - t];
  };
  std::int64_t best = 0;
  auto triangle = [&](int x, int y, int z) {
    if (!ball.certified(x, y) || !ball.certified(x, z) || !ball.certified(y, z)) return;
    ++rep.tested;
    const int corner[3][3] = {{x, y, z}, {y, x, z}, {z, x, y}};
    for (const auto& c : corner) {
      const std::int64_t gp2 = ball.dist(c[0], c[1]) + ball.dist(c[0], c[2]) - ball.dist(c[1], c[2]);
      const auto& s1 = side(c[0], c[1]);
      const auto& s2 = side(c[0], c[2]);
      for (std::int64_t t = 0; 2 * t <= gp2; ++t) {
        const std::int64_t f = ball.dist(along(s1, c[0], t), along(s2, c[0], t));
        if (f > best) {
          best = f;
          rep.witness = {x, y, z};
        }
      }
    }
  };
  if (use_exhaustive(policy, n)) {
    rep.policy = "exhaustive";
    rep.exhaustive = true;
    if (policy.anchors.empty()) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          for (std::size_t c = b + 1; c < n; ++c) triangle(pts[a], pts[b], pts[c]);
    } else {
      for (int a : policy.anchors)
        for (std::size_t b = 0; b < n; ++b) {
          if (pts[b] == a) continue;
          for (std::size_t c = b + 1; c < n; ++c)
            if (pts[c] != a) triangle(a, pts[b], pts[c]);
        }
    }
  } else {
    rep.policy = "sampled";
    Sampler rng(policy.seed);
    const std::uint64_t samples = std::min<std::uint64_t>(policy.samples, 20000);
    for (std::uint64_t k = 0; k < samples * 8 && rep.tested < samples; ++k) {
      int x = pts[rng.below(n)], y = pts[rng.below(n)], z = pts[rng.below(n)];
      if (x == y || y == z || x == z) continue;
      triangle(x, y, z);
    }
  }
  rep.delta_thin = Rational(best, 1);
  return rep;
}

Rational gromov_product(const BallSnapshot& ball, int x, int y, int p) {
  if (!ball.certified(x, p) || !ball.certified(y, p) || !ball.certified(x, y)) {
    throw std::invalid_argument("Gromov product needs certified distances");
  }
  return Rational(ball.dist(x, p) + ball.dist(y, p) - ball.dist(x, y), 2 * ball.unit());
}

bool is_tree(const BallSnapshot& ball) {
  if (ball.size() == 0) return true;
  if (ball.edge_count() + 1 != ball.size()) return false;
  auto r = ball.row(0);
  return std::none_of(r->begin(), r->end(), [](std::int32_t d) { return d >= BallSnapshot::kInf; });
}

bool is_block_graph(const BallSnapshot& ball) {
  const int n = static_cast<int>(ball.size());
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::pair<int, int>> edge_stack;
  int timer = 0;
  struct Frame {
    int v, parent;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> st{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!st.empty()) {
      Frame& f = st.back();
      auto nb = ball.neighbors(f.v);
      if (f.next < nb.size()) {
        const int w = nb[f.next++];
        if (w == f.parent) continue;
        if (disc[w] < 0) {
          edge_stack.emplace_back(f.v, w);
          disc[w] = low[w] = timer++;
          st.push_back({w, f.v, 0});
        } else if (disc[w] < disc[f.v]) {
          edge_stack.emplace_back(f.v, w);
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      const int v = f.v, parent = f.parent;
      st.pop_back();
      if (parent < 0) continue;
      low[parent] = std::min(low[parent], low[v]);
      if (low[v] >= disc[parent]) {
        // Pop one block.
        std::vector<int> verts;
        std::size_t edges = 0;
        while (!edge_stack.empty()) {
          auto e = edge_stack.back();
          edge_stack.pop_back();
          ++edges;
          verts.push_back(e.first);
          verts.push_back(e.second);
          if (e.first == parent && e.second == v) break;
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        const std::size_t k = verts.size();
        if (edges != k * (k - 1) / 2) return false;
      }
    }
  }
  return true;
}

std::vector<std::int32_t> distance_to_set(const BallSnapshot& ball, const std::vector<int>& set) {
  const std::size_t n = ball.size();
  std::vector<std::int32_t> d(n, BallSnapshot::kInf);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int s : set) {
    d[s] = 0;
    pq.push({0, s});
  }
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du != d[u]) continue;
    auto nb = ball.neighbors(u);
    const std::size_t off = ball.edge_offset(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const std::int64_t nd = du + ball.edge_weight(off + k);
      if (nd < d[nb[k]]) {
        d[nb[k]] = static_cast<std::int32_t>(nd);
        pq.push({nd, nb[k]});
      }
    }
  }
  return d;
}

namespace {

// Greedy successor toward `target` (smallest-index neighbor one step closer).
int successor(const BallSnapshot& ball, const std::vector<std::int32_t>& r, int v) {
  auto nb = ball.neighbors(v);
  const std::size_t off = ball.edge_offset(v);
  for (std::size_t k = 0; k < nb.size(); ++k)
    if (r[nb[k]] + ball.edge_weight(off + k) == r[v]) return nb[k];
  return -1;
}

}  // namespace

Rational quasiconvexity_defect(const BallSnapshot& ball, const std::vector<int>& subset) {
  const auto ds = distance_to_set(ball, subset);
  std::int64_t best = 0;
  const std::size_t n = ball.size();
  std::vector<std::int32_t> memo(n, -1);
  std::vector<int> stamp(n, -1);
  for (std::size_t bi = 0; bi < subset.size(); ++bi) {
    const int b = subset[bi];
    auto rp = ball.row(b);
    const auto& r = *rp;
    // memo[v]: max of ds along the canonical geodesic from v to b.
    std::vector<int> stack;
    for (std::size_t ai = 0; ai < bi; ++ai) {
      const int a = subset[ai];
      if (!ball.certified(a, b)) continue;
      int v = a;
      while (stamp[v] != static_cast<int>(bi)) {
        stack.push_back(v);
        if (v == b) break;
        v = successor(ball, r, v);
        if (v < 0) throw std::logic_error("geodesic walk stalled");
      }
      std::int32_t acc = stamp[v] == static_cast<int>(bi) ? memo[v] : 0;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        acc = std::max(acc, ds[u]);
        memo[u] = acc;
        stamp[u] = static_cast<int>(bi);
      }
      best = std::max<std::int64_t>(best, memo[a]);
    }
  }
  return Rational(best, ball.unit());
}

VisibilityReport visibility_defect(const BallSnapshot& ball, std::int64_t margin) {
  if (ball.weighted()) throw std::invalid_argument("visibility defect needs an unweighted ball");
  const std::int64_t target = ball.radius() - margin;
  if (margin < 0 || target < 0) throw std::invalid_argument("margin must lie in [0, R]");
  const std::size_t n = ball.size();
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ball.center_distance(a) > ball.center_distance(b); });
  std::vector<char> ext(n, 0);
  for (int v : order) {
    const std::int64_t cd = ball.center_distance(v);
    if (cd > target) continue;
    if (cd == target) {
      ext[v] = 1;
      continue;
    }
    for (int w : ball.neighbors(v))
      if (ball.center_distance(w) == cd + 1 && ext[w]) {
        ext[v] = 1;
        break;
      }
  }
  std::vector<int> set;
  for (std::size_t i = 0; i < n; ++i)
    if (ext[i]) set.push_back(static_cast<int>(i));
  VisibilityReport rep;
  if (set.empty()) throw std::invalid_argument("sphere at R - margin is empty");
  const auto d = distance_to_set(ball, set);
  std::int64_t best = 0;
  for (std::size_t b = 0; b < n; ++b) {
    if (ball.center_distance(static_cast<int>(b)) > target) continue;
    ++rep.tested;
    if (d[b] > best) {
      best = d[b];
      rep.worst = static_cast<int>(b);
    }
  }
  rep.defect = Rational(best, 1);
  return rep;
}

TightPathReport tight_path_hausdorff(const BallSnapshot& ball, const std::vector<int>& path, std::int64_t C,
                                     Rational delta) {
  TightPathReport rep;
  if (path.empty()) throw std::invalid_argument("empty path");
  const Rational lam = Rational(6 * C + 1) + Rational(8) * delta;
  rep.local_window = lam.num() / lam.den();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto nb = ball.neighbors(path[i]);
    if (std::find(nb.begin(), nb.end(), path[i + 1]) == nb.end()) {
      rep.failure = "consecutive vertices " + std::to_string(i) + "," + std::to_string(i + 1) + " are not adjacent";
      return rep;
    }
  }
  const std::int64_t L = static_cast<std::int64_t>(path.size()) - 1;
  const std::int64_t W = std::min(L, rep.local_window);
  // (1,C)-quasi-geodesic on every window.
  for (std::int64_t s = 0; s <= L; ++s)
    for (std::int64_t u = s + 1; u <= std::min(L, s + W); ++u)
      if (ball.dist(path[s], path[u]) < (u - s) - C) {
        rep.failure = "(1,C)-quasigeodesic fails on [" + std::to_string(s) + "," + std::to_string(u) + "]";
        return rep;
      }
  // Every geodesic between window endpoints passes C-close to each interior point.
  const std::size_t n = ball.size();
  for (std::int64_t t = 0; t <= L; ++t) {
    auto near = ball.row(path[t]);
    for (std::int64_t s = std::max<std::int64_t>(0, t - W); s <= t; ++s) {
      if ((*near)[path[s]] <= C) continue;
      for (std::int64_t u = t; u <= std::min(L, s + W); ++u) {
        if ((*near)[path[u]] <= C) continue;
        const std::int64_t target = ball.dist(path[s], path[u]);
        std::vector<std::int32_t> d(n, BallSnapshot::kInf);
        std::vector<int> q{path[s]};
        d[path[s]] = 0;
        for (std::size_t h = 0; h < q.size(); ++h) {
          const int v = q[h];
          if (d[v] >= target) continue;
          for (int w : ball.neighbors(v)) {
            if (d[w] != BallSnapshot::kInf || (*near)[w] <= C) continue;
            d[w] = d[v] + 1;
            q.push_back(w);
          }
        }
        if (d[path[u]] == target) {
          rep.failure = "a geodesic from point " + std::to_string(s) + " to " + std::to_string(u) +
                        " avoids the C-neighborhood of point " + std::to_string(t);
          return rep;
        }
      }
    }
  }
  rep.precondition_ok = true;
  const auto geo = ball.canonical_geodesic(path.front(), path.back());
  const auto to_geo = distance_to_set(ball, geo);
  const auto to_path = distance_to_set(ball, path);
  std::int64_t h = 0;
  for (int v : path) h = std::max<std::int64_t>(h, to_geo[v]);
  for (int v : geo) h = std::max<std::int64_t>(h, to_path[v]);
  rep.hausdorff = Rational(h, 1);
  return rep;
}

}  // namespace fillinglab

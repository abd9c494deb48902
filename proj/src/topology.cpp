#include "fillinglab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fillinglab/budget.hpp"
#include "fillinglab/kv.hpp"
#include "fillinglab/util.hpp"

namespace fillinglab {

std::size_t RipsComplex::total() const {
  std::size_t t = 0;
  for (int k = 0; k < static_cast<int>(simplices.size()); ++k) t += count(k);
  return t;
}

RipsComplex rips_skeleton(const std::vector<double>& d, std::size_t n, double scale, int max_dim,
                          std::size_t simplex_budget) {
  if (d.size() != n * n) throw std::invalid_argument("table size mismatch");
  if (max_dim < 0 || max_dim > 3) throw std::invalid_argument("max_dim must be in [0, 3]");
  RipsComplex c;
  c.scale = scale;
  c.points = n;
  c.max_dim = max_dim;
  c.simplices.assign(static_cast<std::size_t>(max_dim) + 1, {});
  for (std::uint32_t i = 0; i < n; ++i) c.simplices[0].push_back(i);
  if (max_dim == 0) return c;
  std::vector<std::vector<std::uint32_t>> up(n);  // neighbors with larger index
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (d[i * n + j] <= scale) {
        up[i].push_back(j);
        adj[i][j] = adj[j][i] = 1;
      }
  std::size_t total = n;
  auto charge = [&](std::size_t k) {
    total += k;
    if (total > simplex_budget)
      throw BudgetExceeded("Rips complex exceeds the simplex budget at scale " + std::to_string(scale));
  };
  for (std::uint32_t i = 0; i < n; ++i)
    for (auto j : up[i]) {
      charge(1);
      c.simplices[1].insert(c.simplices[1].end(), {i, j});
      if (max_dim < 2) continue;
      for (auto k : up[j]) {
        if (!adj[i][k]) continue;
        charge(1);
        c.simplices[2].insert(c.simplices[2].end(), {i, j, k});
        if (max_dim < 3) continue;
        for (auto l : up[k]) {
          if (!adj[i][l] || !adj[j][l]) continue;
          charge(1);
          c.simplices[3].insert(c.simplices[3].end(), {i, j, k, l});
        }
      }
    }
  return c;
}

std::vector<std::vector<std::uint32_t>> boundary_columns(const RipsComplex& c, int k) {
  if (k < 1 || k >= static_cast<int>(c.simplices.size())) return {};
  const auto& faces = c.simplices[k - 1];
  const std::size_t fw = static_cast<std::size_t>(k);
  if (c.points >= (1u << 16)) throw std::invalid_argument("too many points for face packing");
  auto pack = [](const std::uint32_t* v, std::size_t len) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < len; ++i) key = (key << 16) | v[i];
    return key;
  };
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  index.reserve(faces.size() / fw);
  for (std::size_t f = 0; f * fw < faces.size(); ++f) index.emplace(pack(&faces[f * fw], fw), static_cast<std::uint32_t>(f));
  const auto& simp = c.simplices[k];
  const std::size_t w = fw + 1;
  std::vector<std::vector<std::uint32_t>> cols;
  cols.reserve(simp.size() / w);
  std::vector<std::uint32_t> face(fw);
  for (std::size_t s = 0; s * w < simp.size(); ++s) {
    std::vector<std::uint32_t> col;
    for (std::size_t drop = 0; drop < w; ++drop) {
      std::size_t p = 0;
      for (std::size_t v = 0; v < w; ++v)
        if (v != drop) face[p++] = simp[s * w + v];
      col.push_back(index.at(pack(face.data(), fw)));
    }
    std::sort(col.begin(), col.end());
    cols.push_back(std::move(col));
  }
  return cols;
}

std::size_t gf2_rank(std::vector<std::vector<std::uint32_t>> columns) {
  // Each column is a sorted set of rows; reduce by the column owning its
  // largest row until the pivot is fresh or the column vanishes.
  std::unordered_map<std::uint32_t, std::size_t> owner;
  std::size_t rank = 0;
  std::vector<std::uint32_t> tmp;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    auto& col = columns[j];
    while (!col.empty()) {
      auto it = owner.find(col.back());
      if (it == owner.end()) break;
      const auto& other = columns[it->second];
      tmp.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(tmp));
      col.swap(tmp);
    }
    if (!col.empty()) {
      owner.emplace(col.back(), j);
      ++rank;
    }
  }
  return rank;
}

Betti betti_gf2(const RipsComplex& c) {
  std::array<std::size_t, 5> rank{};  // rank of the boundary map d_k, k = 0..4
  for (int k = 1; k < static_cast<int>(c.simplices.size()); ++k) rank[k] = gf2_rank(boundary_columns(c, k));
  Betti b{};
  for (int k = 0; k < 3; ++k) {
    if (k > c.max_dim) break;
    const auto cycles = static_cast<std::int64_t>(c.count(k)) - static_cast<std::int64_t>(rank[k]);
    b[k] = cycles - static_cast<std::int64_t>(k + 1 <= c.max_dim ? rank[k + 1] : 0);
  }
  return b;
}

std::string format_betti(const Betti& b) {
  std::ostringstream os;
  os << "(" << b[0] << "," << b[1] << "," << b[2] << ")";
  return os.str();
}

std::vector<std::size_t> farthest_point_sample(const std::vector<double>& d, std::size_t n, std::size_t keep,
                                               std::uint64_t seed) {
  std::vector<std::size_t> out;
  if (n == 0 || keep == 0) return out;
  if (keep >= n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  Sampler rng(seed);
  out.push_back(static_cast<std::size_t>(rng.below(n)));
  std::vector<double> gap(n);
  for (std::size_t i = 0; i < n; ++i) gap[i] = d[out[0] * n + i];
  while (out.size() < keep) {
    std::size_t next = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (gap[i] > gap[next]) next = i;
    out.push_back(next);
    for (std::size_t i = 0; i < n; ++i) gap[i] = std::min(gap[i], d[next * n + i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BettiProfile betti_profile(const std::vector<double>& d_in, std::size_t n_in, const std::vector<double>& scales,
                           std::size_t max_points, std::uint64_t seed, std::size_t simplex_budget) {
  if (!std::is_sorted(scales.begin(), scales.end())) throw std::invalid_argument("scale grid must be sorted");
  BettiProfile p;
  p.scales = scales;
  p.seed = seed;
  p.original_points = n_in;
  const auto keep = farthest_point_sample(d_in, n_in, max_points, seed);
  const std::size_t n = keep.size();
  p.points = n;
  std::vector<double> d(n * n);
  double diam = 0, closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      d[i * n + j] = d_in[keep[i] * n_in + keep[j]];
      diam = std::max(diam, d[i * n + j]);
      if (i != j) closest = std::min(closest, d[i * n + j]);
    }
  std::vector<char> interior;
  for (double s : scales) {
    try {
      const auto c = rips_skeleton(d, n, s, 3, simplex_budget);
      p.betti.push_back(betti_gf2(c));
      p.simplices.push_back(c.total());
      p.over_budget.push_back(0);
    } catch (const BudgetExceeded&) {
      p.betti.push_back({-1, -1, -1});
      p.simplices.push_back(0);
      p.over_budget.push_back(1);
    }
    interior.push_back(!p.over_budget.back() && s >= closest && s < diam);
  }
  std::size_t best_len = 0, best_start = 0;
  for (std::size_t i = 0; i < scales.size();) {
    if (!interior[i]) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < scales.size() && interior[j] && p.betti[j] == p.betti[i]) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_start = i;
    }
    i = j;
  }
  if (best_len == 0) {
    // no scale strictly between the discrete and the cone regimes
    for (std::size_t i = 0; i < scales.size();) {
      if (p.over_budget[i] || scales[i] >= diam) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < scales.size() && !p.over_budget[j] && scales[j] < diam && p.betti[j] == p.betti[i]) ++j;
      if (j - i > best_len) {
        best_len = j - i;
        best_start = i;
      }
      i = j;
    }
  }
  if (best_len > 0) {
    p.plateau = p.betti[best_start];
    p.plateau_from = scales[best_start];
    p.plateau_to = scales[best_start + best_len - 1];
    p.plateau_length = best_len;
  }
  return p;
}

std::vector<double> parse_scale_grid(const std::string& text) {
  std::vector<double> out;
  auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double a = std::stod(parts[0]), b = std::stod(parts[1]), step = std::stod(parts[2]);
    if (step <= 0 || b < a) throw std::invalid_argument("bad scale grid '" + text + "'");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + step * static_cast<double>(i));
    return out;
  }
  for (const auto& s : split(text, ',')) {
    const auto t = trim(s);
    if (!t.empty()) out.push_back(std::stod(t));
  }
  if (out.empty()) throw std::invalid_argument("empty scale grid");
  std::sort(out.begin(), out.end());
  return out;
}

LoopFilling loop_filling_check(const std::vector<double>& d, std::size_t n, const std::vector<std::size_t>& loop,
                               double scale) {
  LoopFilling out;
  const auto c = rips_skeleton(d, n, scale, 2);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> edge_index;
  for (std::size_t e = 0; e < c.count(1); ++e)
    edge_index.emplace(std::make_pair(c.simplices[1][2 * e], c.simplices[1][2 * e + 1]), static_cast<std::uint32_t>(e));
  std::map<std::uint32_t, int> chain;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto a = static_cast<std::uint32_t>(loop[i]);
    const auto b = static_cast<std::uint32_t>(loop[(i + 1) % loop.size()]);
    if (a >= n || b >= n) throw std::invalid_argument("loop point out of range");
    if (a == b) continue;
    if (d[a * n + b] > scale) throw std::invalid_argument("loop is not fine at this scale");
    chain[edge_index.at({std::min(a, b), std::max(a, b)})] ^= 1;
  }
  std::vector<std::uint32_t> z;
  for (auto [e, bit] : chain)
    if (bit) z.push_back(e);
  out.edges = z.size();
  auto cols = boundary_columns(c, 2);
  const auto base = gf2_rank(cols);
  cols.push_back(z);
  out.fillable = z.empty() || gf2_rank(std::move(cols)) == base;
  return out;
}

std::vector<double> euclidean_table(const std::vector<std::array<double, 3>>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
      d[i * n + j] = std::sqrt(s);
    }
  return d;
}

std::vector<double> icosphere_points(int subdivisions, std::size_t* n) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                          {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  auto normalize = [](std::array<double, 3> p) {
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return std::array<double, 3>{p[0] / r, p[1] / r, p[2] / r};
  };
  for (auto& p : v) p = normalize(p);
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back(normalize({(v[a][0] + v[b][0]) / 2, (v[a][1] + v[b][1]) / 2, (v[a][2] + v[b][2]) / 2}));
      mid.emplace(key, static_cast<int>(v.size() - 1));
      return static_cast<int>(v.size() - 1);
    };
    std::vector<std::array<int, 3>> g;
    for (auto [a, b, c] : f) {
      const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      g.push_back({a, ab, ca});
      g.push_back({b, bc, ab});
      g.push_back({c, ca, bc});
      g.push_back({ab, bc, ca});
    }
    f = std::move(g);
  }
  if (n) *n = v.size();
  return euclidean_table(v);
}

std::vector<double> circle_points(std::size_t n) {
  std::vector<std::array<double, 3>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({std::cos(a), std::sin(a), 0});
  }
  return euclidean_table(pts);
}

std::vector<double> isolated_points(std::size_t m) {
  std::vector<double> d(m * m, 1.0);
  for (std::size_t i = 0; i < m; ++i) d[i * m + i] = 0;
  return d;
}

}  // namespace fillinglab

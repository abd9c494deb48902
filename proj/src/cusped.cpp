#include "fillinglab/cusped.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "fillinglab/budget.hpp"
#include "fillinglab/util.hpp"

namespace fillinglab {

HoroballModel HoroballModel::parse(const std::string& text) {
  HoroballModel m;
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto parse_lambda = [&](double fallback) {
    if (arg.empty()) return fallback;
    if (arg == "e") return std::exp(1.0);
    return std::stod(arg);
  };
  if (kind == "comb2" || kind == "comb") {
    m.kind = ModelKind::Combinatorial;
    m.lambda = kind == "comb2" ? 2.0 : parse_lambda(2.0);
    if (m.lambda != 2.0) m.kind = ModelKind::Scaled;
  } else if (kind == "scaled") {
    m.kind = ModelKind::Scaled;
    m.lambda = parse_lambda(2.0);
  } else if (kind == "cc") {
    m.kind = ModelKind::CannonCooper;
    m.lambda = parse_lambda(2.0);
  } else if (kind == "warped") {
    m.kind = ModelKind::Warped;
    m.lambda = parse_lambda(2.0);
  } else {
    throw std::invalid_argument("unknown horoball model '" + text + "'");
  }
  if (!(m.lambda > 1.0)) throw std::invalid_argument("horoball scaling must exceed 1");
  return m;
}

std::string HoroballModel::name() const {
  std::ostringstream os;
  switch (kind) {
    case ModelKind::Combinatorial: return "comb2";
    case ModelKind::Scaled: os << "scaled:" << lambda; break;
    case ModelKind::CannonCooper: os << "cc:" << lambda; break;
    case ModelKind::Warped: os << "warped:" << lambda; break;
  }
  return os.str();
}

std::int64_t HoroballModel::reach(std::int64_t level) const {
  if (kind == ModelKind::Combinatorial) return level >= 62 ? kNoCap : (std::int64_t{1} << level);
  if (weighted()) return 1;
  const long double r = std::pow(static_cast<long double>(lambda), static_cast<long double>(level));
  if (r > 4e18L) return kNoCap;
  return static_cast<std::int64_t>(std::floor(r + 1e-9L));
}

std::int64_t HoroballModel::vertical_weight() const {
  if (!weighted()) return 1;
  return kind == ModelKind::Warped ? denominator / 2 : denominator;
}

std::int64_t HoroballModel::horizontal_weight(std::int64_t level) const {
  if (!weighted()) return 1;
  const long double depth = depth_of_level(level);
  const long double w = static_cast<long double>(denominator) * std::pow(static_cast<long double>(lambda), -depth);
  return std::max<std::int64_t>(1, std::llround(w));
}

double HoroballModel::depth_of_level(std::int64_t level) const {
  return kind == ModelKind::Warped ? static_cast<double>(level) / 2.0 : static_cast<double>(level);
}

CuspedSpace::CuspedSpace(GroupContext ctx, HoroballModel model)
    : ctx_(std::move(ctx)), model_(model), caps_(ctx_.factors().size(), kNoCap) {}

void CuspedSpace::set_depth_cap(int peripheral, std::int64_t max_level) { caps_.at(peripheral) = max_level; }

std::int64_t CuspedSpace::depth_cap(const Center& c) const {
  std::int64_t cap = caps_.at(c.periph);
  if (cap_fn_) cap = std::min(cap, cap_fn_(c));
  return cap;
}

Center CuspedSpace::center_of(const CuspedVertex& v) const {
  if (v.is_cayley()) throw std::invalid_argument("Cayley vertex has no horoball center");
  return {ctx_.peripheral_coset_id(v.g, v.periph), v.periph};
}

bool CuspedSpace::contains(const CuspedVertex& v) const {
  if (v.is_cayley()) return min_level_ == 0;
  if (v.depth < std::max<std::int64_t>(1, min_level_)) return false;
  return v.depth <= depth_cap(center_of(v));
}

CuspedVertex CuspedSpace::horoball_vertex(const GroupElement& g, int i, std::int64_t level) const {
  if (level == 0) return cayley(g);
  return canonical({g, i, level});
}

std::vector<std::pair<CuspedVertex, std::int64_t>> CuspedSpace::neighbors(const CuspedVertex& v) const {
  std::vector<std::pair<CuspedVertex, std::int64_t>> raw;
  const std::int64_t vw = model_.vertical_weight();
  if (v.is_cayley()) {
    for (int i : ctx_.peripheral()) {
      CuspedVertex up{v.g, i, 1};
      if (contains(up)) raw.emplace_back(std::move(up), vw);
    }
    for (const auto& s : ctx_.generating_set()) {
      raw.emplace_back(CuspedVertex{ctx_.multiply_syllable(v.g, s.factor, s.value), -1, 0}, 1);
    }
  } else {
    const Center c = center_of(v);
    const std::int64_t cap = depth_cap(c);
    if (v.depth + 1 <= cap) raw.emplace_back(CuspedVertex{v.g, v.periph, v.depth + 1}, vw);
    if (v.depth == 1) {
      if (min_level_ == 0) raw.emplace_back(CuspedVertex{v.g, -1, 0}, vw);
    } else if (v.depth - 1 >= min_level_) {
      raw.emplace_back(CuspedVertex{v.g, v.periph, v.depth - 1}, vw);
    }
    const auto& fac = ctx_.factor(v.periph);
    const IntVec p = ctx_.peripheral_part(v.g, v.periph);
    const std::int64_t reach = model_.reach(v.depth);
    const std::int64_t hw = model_.horizontal_weight(v.depth);
    for (std::int64_t r = 1; r <= reach; ++r) {
      auto layer = fac.sphere(r);
      if (layer.empty()) break;
      for (const auto& q : layer) {
        raw.emplace_back(CuspedVertex{ctx_.multiply_syllable(c.label, v.periph, fac.add(p, q)), v.periph, v.depth},
                         hw);
      }
    }
  }
  if (!canon_) return raw;
  const CuspedVertex self = canonical(v);
  std::vector<std::pair<CuspedVertex, std::int64_t>> out;
  out.reserve(raw.size());
  VertexMap<std::size_t> seen;
  for (auto& [w, wt] : raw) {
    CuspedVertex cw = canon_(w);
    if (cw == self) continue;
    auto [it, fresh] = seen.emplace(cw, out.size());
    if (fresh) {
      out.emplace_back(std::move(cw), wt);
    } else {
      out[it->second].second = std::min(out[it->second].second, wt);
    }
  }
  return out;
}

std::string CuspedSpace::format(const CuspedVertex& v) const {
  if (v.is_cayley()) return ctx_.format(v.g);
  std::ostringstream os;
  os << "(" << ctx_.format(v.g) << ";P" << v.periph << ";" << v.depth << ")";
  return os.str();
}

std::string CuspedSpace::format(const Center& c) const {
  return ctx_.format(c.label) + "P" + std::to_string(c.periph);
}

std::int64_t horosphere_distance(const AbelianFactor& p, const IntVec& u, const IntVec& w, std::int64_t n) {
  const std::int64_t d = p.distance(u, w);
  if (n <= 0) return d;
  if (n >= 62) return d == 0 ? 0 : 1;
  const std::int64_t s = std::int64_t{1} << n;
  return (d + s - 1) / s;
}

std::int64_t horosphere_distance(const CuspedSpace& space, const CuspedVertex& u, const CuspedVertex& w) {
  if (u.is_cayley() || w.is_cayley()) {
    throw std::invalid_argument("horosphere distance needs horoball vertices");
  }
  if (u.depth != w.depth || !(space.center_of(u) == space.center_of(w))) {
    throw std::invalid_argument("vertices lie on different horospheres");
  }
  const auto& ctx = space.context();
  return horosphere_distance(ctx.factor(u.periph), ctx.peripheral_part(u.g, u.periph),
                             ctx.peripheral_part(w.g, w.periph), u.depth);
}

// ---------------------------------------------------------------------------

BallSnapshot BallSnapshot::build(const CuspedSpace& space, const CuspedVertex& center_in, std::int64_t radius) {
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  BallSnapshot b;
  b.unit_ = space.model().unit();
  b.radius_ = radius * b.unit_;
  b.model_name_ = space.model().name();
  const CuspedVertex center = space.canonical(center_in);
  if (!space.contains(center)) throw std::invalid_argument("center is not a vertex of the space");
  const std::size_t cap = budget::max_ball_vertices();
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj;
  auto add_vertex = [&](const CuspedVertex& v, std::int64_t d) {
    int id = static_cast<int>(b.vertices_.size());
    b.index_.emplace(v, id);
    b.vertices_.push_back(v);
    b.center_dist_.push_back(d);
    adj.emplace_back();
    if (b.vertices_.size() > cap) {
      throw BudgetExceeded("ball exceeds vertex budget (" + std::to_string(cap) + "); raise FILLINGLAB_MAX_VERTICES");
    }
    return id;
  };
  add_vertex(center, 0);
  std::vector<char> expanded;
  if (!space.model().weighted()) {
    for (std::size_t head = 0; head < b.vertices_.size(); ++head) {
      const std::int64_t d = b.center_dist_[head];
      if (d >= b.radius_) continue;
      for (auto& [w, wt] : space.neighbors(b.vertices_[head])) {
        auto it = b.index_.find(w);
        int id = it == b.index_.end() ? add_vertex(w, d + 1) : it->second;
        adj[head].emplace_back(id, 1);
      }
    }
    expanded.assign(b.vertices_.size(), 0);
    for (std::size_t i = 0; i < b.vertices_.size(); ++i) expanded[i] = b.center_dist_[i] < b.radius_;
  } else {
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, 0});
    std::vector<char> done(1, 0);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u] || d != b.center_dist_[u]) continue;
      done[u] = 1;
      for (auto& [w, wt] : space.neighbors(b.vertices_[u])) {
        const std::int64_t nd = d + wt;
        if (nd > b.radius_) continue;
        auto it = b.index_.find(w);
        if (it == b.index_.end()) {
          int id = add_vertex(w, nd);
          done.push_back(0);
          pq.push({nd, id});
        } else if (nd < b.center_dist_[it->second]) {
          b.center_dist_[it->second] = nd;
          pq.push({nd, it->second});
        }
      }
    }
    // Reorder by (distance, discovery) so that indices follow the metric.
    std::vector<int> order(b.vertices_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return b.center_dist_[x] < b.center_dist_[y]; });
    std::vector<CuspedVertex> vs;
    std::vector<std::int64_t> ds;
    for (int i : order) {
      vs.push_back(std::move(b.vertices_[i]));
      ds.push_back(b.center_dist_[i]);
    }
    b.vertices_ = std::move(vs);
    b.center_dist_ = std::move(ds);
    b.index_.clear();
    for (std::size_t i = 0; i < b.vertices_.size(); ++i) b.index_.emplace(b.vertices_[i], static_cast<int>(i));
    adj.assign(b.vertices_.size(), {});
    expanded.assign(b.vertices_.size(), 0);
  }
  for (std::size_t i = 0; i < b.vertices_.size(); ++i) {
    if (expanded[i]) continue;
    for (auto& [w, wt] : space.neighbors(b.vertices_[i])) {
      auto it = b.index_.find(w);
      if (it != b.index_.end()) adj[i].emplace_back(it->second, wt);
    }
  }
  b.center_ = 0;
  b.labels_.reserve(b.vertices_.size());
  b.levels_.reserve(b.vertices_.size());
  b.periphs_.reserve(b.vertices_.size());
  for (const auto& v : b.vertices_) {
    b.labels_.push_back(space.format(v));
    b.levels_.push_back(v.depth);
    b.periphs_.push_back(v.periph);
  }
  b.finalize(adj);
  if (!space.model().weighted()) b.weights_.clear();
  std::int64_t far = 0;
  for (auto d : b.center_dist_) far = std::max(far, d);
  b.complete_ = !space.model().weighted() && far < b.radius_;
  return b;
}

void BallSnapshot::finalize(std::vector<std::vector<std::pair<int, std::int64_t>>>& adj) {
  offsets_.assign(adj.size() + 1, 0);
  targets_.clear();
  weights_.clear();
  for (std::size_t i = 0; i < adj.size(); ++i) {
    auto& a = adj[i];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.first == y.first; }),
            a.end());
    for (auto& [t, w] : a) {
      if (t == static_cast<int>(i)) continue;
      targets_.push_back(t);
      weights_.push_back(w);
    }
    offsets_[i + 1] = targets_.size();
  }
}

BallSnapshot BallSnapshot::from_edges(std::size_t n, const std::vector<std::pair<int, int>>& edges, int center,
                                      std::vector<std::string> labels, std::int64_t ball_radius) {
  BallSnapshot b;
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= static_cast<int>(n) || v >= static_cast<int>(n)) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    adj[u].emplace_back(v, 1);
    adj[v].emplace_back(u, 1);
  }
  b.finalize(adj);
  b.weights_.clear();
  b.center_ = center;
  b.model_name_ = "graph";
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  b.labels_ = std::move(labels);
  auto r = b.row(center);
  b.center_dist_.assign(r->begin(), r->end());
  b.radius_ = 0;
  for (auto d : b.center_dist_)
    if (d < kInf) b.radius_ = std::max<std::int64_t>(b.radius_, d);
  b.complete_ = ball_radius < 0;
  if (ball_radius >= 0) b.radius_ = ball_radius;
  return b;
}

std::optional<int> BallSnapshot::index_of(const CuspedVertex& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<int, int>> BallSnapshot::edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
      if (static_cast<int>(i) < targets_[k]) out.emplace_back(static_cast<int>(i), targets_[k]);
  return out;
}

BallSnapshot::Row BallSnapshot::row(int src) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->rows.find(src);
    if (it != cache_->rows.end()) return it->second;
  }
  const std::size_t n = size();
  std::vector<std::int32_t> d(n, kInf);
  d[src] = 0;
  if (weights_.empty()) {
    std::vector<int> queue;
    queue.reserve(n);
    queue.push_back(src);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int u = queue[h];
      const std::int32_t du = d[u] + 1;
      for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
        const int w = targets_[k];
        if (d[w] == kInf) {
          d[w] = du;
          queue.push_back(w);
        }
      }
    }
  } else {
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, src});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != d[u]) continue;
      for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
        const int w = targets_[k];
        const std::int64_t nd = du + weights_[k];
        if (nd < d[w]) {
          d[w] = static_cast<std::int32_t>(nd);
          pq.push({nd, w});
        }
      }
    }
  }
  std::lock_guard lock(cache_->mutex);
  if (cache_->entries + n > budget::max_table_entries()) {
    cache_->rows.clear();
    cache_->entries = 0;
  }
  auto ptr = std::make_shared<const std::vector<std::int32_t>>(std::move(d));
  auto [it, fresh] = cache_->rows.emplace(src, ptr);
  if (fresh) cache_->entries += n;
  return it->second;
}

std::vector<std::int32_t> BallSnapshot::full_table() const {
  const std::size_t n = size();
  if (n * n > budget::max_table_entries()) {
    throw BudgetExceeded("full distance table exceeds FILLINGLAB_MAX_TABLE");
  }
  std::vector<std::int32_t> t(n * n);
  parallel_chunks(n, std::min<std::size_t>(n, 64), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto r = row(static_cast<int>(i));
      std::copy(r->begin(), r->end(), t.begin() + i * n);
    }
  });
  return t;
}

bool BallSnapshot::certified(int i, int j) const {
  const std::int64_t d = dist(i, j);
  if (d >= kInf) return false;
  if (complete_) return true;
  return 2 * std::max(center_dist_[i], center_dist_[j]) + d <= 2 * radius_;
}

std::vector<int> BallSnapshot::canonical_geodesic(int from, int to) const {
  const auto rp = row(to);
  const auto& r = *rp;
  if (r[from] >= kInf) throw std::invalid_argument("vertices are disconnected in the ball");
  std::vector<int> path{from};
  int cur = from;
  while (cur != to) {
    int next = -1;
    for (std::size_t k = offsets_[cur]; k < offsets_[cur + 1]; ++k) {
      const int w = targets_[k];
      if (r[w] + edge_weight(k) == r[cur]) {
        next = w;
        break;
      }
    }
    if (next < 0) throw std::logic_error("geodesic walk stalled");
    path.push_back(next);
    cur = next;
  }
  return path;
}

BallSnapshot BallSnapshot::induced(const std::vector<int>& keep, int new_center) const {
  BallSnapshot b;
  std::vector<int> pos(size(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) pos[keep[k]] = static_cast<int>(k);
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const int i = keep[k];
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e)
      if (pos[targets_[e]] >= 0) adj[k].emplace_back(pos[targets_[e]], edge_weight(e));
    if (!vertices_.empty()) {
      b.vertices_.push_back(vertices_[i]);
      b.index_.emplace(vertices_[i], static_cast<int>(k));
    }
    b.labels_.push_back(labels_[i]);
    if (!levels_.empty()) b.levels_.push_back(levels_[i]);
    if (!periphs_.empty()) b.periphs_.push_back(periphs_[i]);
  }
  const bool weighted_graph = !weights_.empty();
  b.finalize(adj);
  if (!weighted_graph) b.weights_.clear();
  b.unit_ = unit_;
  b.center_ = new_center;
  b.model_name_ = model_name_;
  auto r = b.row(new_center);
  b.center_dist_.assign(r->begin(), r->end());
  b.radius_ = 0;
  for (auto d : b.center_dist_)
    if (d < kInf) b.radius_ = std::max<std::int64_t>(b.radius_, d);
  return b;
}

// ---------------------------------------------------------------------------

VertexMap<std::int64_t> implicit_ball(const CuspedSpace& space, const CuspedVertex& source, std::int64_t radius) {
  VertexMap<std::size_t> index;
  std::vector<CuspedVertex> verts{space.canonical(source)};
  std::vector<std::int64_t> dist{0};
  index.emplace(verts[0], 0);
  using Item = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0, 0});
  const std::size_t cap = budget::max_ball_vertices();
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (dist[u] != d) continue;
    for (auto& [w, wt] : space.neighbors(verts[u])) {
      const std::int64_t nd = d + wt;
      if (nd > radius) continue;
      auto it = index.find(w);
      if (it == index.end()) {
        index.emplace(w, verts.size());
        verts.push_back(std::move(w));
        dist.push_back(nd);
        pq.push({nd, verts.size() - 1});
        if (verts.size() > cap) throw BudgetExceeded("implicit search exceeds vertex budget");
      } else if (nd < dist[it->second]) {
        dist[it->second] = nd;
        pq.push({nd, it->second});
      }
    }
  }
  VertexMap<std::int64_t> out;
  out.reserve(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) out.emplace(std::move(verts[i]), dist[i]);
  return out;
}

namespace {

struct Frontier {
  VertexMap<std::int64_t> dist;
  std::vector<CuspedVertex> order;  // discovery order
  std::vector<CuspedVertex> layer;
  std::int64_t depth = 0;
};

void expand(const CuspedSpace& space, Frontier& f) {
  std::vector<CuspedVertex> next;
  for (const auto& v : f.layer) {
    for (auto& [w, wt] : space.neighbors(v)) {
      if (f.dist.emplace(w, f.depth + 1).second) {
        f.order.push_back(w);
        next.push_back(std::move(w));
      }
    }
  }
  f.layer = std::move(next);
  ++f.depth;
  if (f.dist.size() > budget::max_ball_vertices()) throw BudgetExceeded("bidirectional search exceeds budget");
}

Frontier start(const CuspedVertex& v) {
  Frontier f;
  f.dist.emplace(v, 0);
  f.order.push_back(v);
  f.layer.push_back(v);
  return f;
}

void grow_to(const CuspedSpace& space, Frontier& f, std::int64_t depth) {
  while (f.depth < depth && !f.layer.empty()) expand(space, f);
}

}  // namespace

std::optional<std::int64_t> implicit_distance(const CuspedSpace& space, const CuspedVertex& a_in,
                                              const CuspedVertex& b_in, std::int64_t cap) {
  if (space.model().weighted()) throw std::invalid_argument("implicit_distance needs an unweighted model");
  const CuspedVertex a = space.canonical(a_in), b = space.canonical(b_in);
  if (a == b) return 0;
  Frontier fa = start(a), fb = start(b);
  while (fa.depth + fb.depth < cap) {
    Frontier& f = fa.layer.size() <= fb.layer.size() ? fa : fb;
    Frontier& other = &f == &fa ? fb : fa;
    if (f.layer.empty()) return std::nullopt;
    expand(space, f);
    std::optional<std::int64_t> best;
    for (const auto& v : f.layer) {
      auto it = other.dist.find(v);
      if (it != other.dist.end()) {
        const std::int64_t d = f.depth + it->second;
        if (!best || d < *best) best = d;
      }
    }
    if (best) return *best <= cap ? best : std::nullopt;
  }
  return std::nullopt;
}

std::vector<CuspedVertex> implicit_geodesic(const CuspedSpace& space, const CuspedVertex& a_in,
                                            const CuspedVertex& b_in, std::int64_t cap) {
  const CuspedVertex a = space.canonical(a_in), b = space.canonical(b_in);
  auto d = implicit_distance(space, a, b, cap);
  if (!d) throw std::runtime_error("endpoints farther apart than the search cap");
  if (*d == 0) return {a};
  if (*d == 1) return {a, b};
  const std::int64_t half = *d / 2;
  Frontier fa = start(a), fb = start(b);
  grow_to(space, fa, half);
  grow_to(space, fb, *d - half);
  for (const auto& m : fa.order) {
    if (fa.dist[m] != half) continue;
    auto it = fb.dist.find(m);
    if (it == fb.dist.end() || it->second != *d - half) continue;
    auto left = implicit_geodesic(space, a, m, half);
    auto right = implicit_geodesic(space, m, b, *d - half);
    left.insert(left.end(), right.begin() + 1, right.end());
    return left;
  }
  throw std::logic_error("no midpoint found on a geodesic");
}

ModelDistortion model_distortion(const BallSnapshot& a, const HoroballModel& ma, const BallSnapshot& b,
                                 const HoroballModel& mb, double min_distance, std::uint64_t pair_cap,
                                 std::uint64_t seed) {
  if (!a.has_vertices() || !b.has_vertices()) throw std::invalid_argument("model comparison needs cusped balls");
  const double scale = std::log(ma.lambda) / std::log(mb.lambda);
  std::vector<int> src, dst;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CuspedVertex v = a.vertex(static_cast<int>(i));
    if (!v.is_cayley()) {
      const double depth = ma.depth_of_level(v.depth) * scale;
      const auto level = static_cast<std::int64_t>(std::llround(depth * static_cast<double>(mb.levels_per_depth())));
      v = level == 0 ? CuspedVertex{v.g, -1, 0} : CuspedVertex{v.g, v.periph, level};
    }
    if (auto j = b.index_of(v)) {
      src.push_back(static_cast<int>(i));
      dst.push_back(*j);
    }
  }
  ModelDistortion out;
  out.matched = src.size();
  const double ua = static_cast<double>(a.unit()), ub = static_cast<double>(b.unit());
  std::vector<std::pair<double, double>> samples;
  auto visit = [&](std::size_t i, std::size_t j) {
    if (!a.certified(src[i], src[j]) || !b.certified(dst[i], dst[j])) return;
    samples.emplace_back(static_cast<double>(a.dist(src[i], src[j])) / ua,
                         static_cast<double>(b.dist(dst[i], dst[j])) / ub);
  };
  const std::uint64_t m = src.size();
  if (m * (m - (m > 0)) / 2 <= pair_cap) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto ra = a.row(src[i]);
      const auto rb = b.row(dst[i]);
      const std::int64_t ca = a.center_distance(src[i]), cb = b.center_distance(dst[i]);
      for (std::size_t j = i + 1; j < m; ++j) {
        const std::int64_t da = (*ra)[src[j]], db = (*rb)[dst[j]];
        // the certification rule of BallSnapshot::certified, inlined
        if (2 * std::max(ca, a.center_distance(src[j])) + da > 2 * a.radius() && !a.complete()) continue;
        if (2 * std::max(cb, b.center_distance(dst[j])) + db > 2 * b.radius() && !b.complete()) continue;
        samples.emplace_back(static_cast<double>(da) / ua, static_cast<double>(db) / ub);
      }
    }
  } else {
    Sampler rng(seed);
    for (std::uint64_t k = 0; k < pair_cap; ++k) {
      const auto i = rng.below(m), j = rng.below(m);
      if (i != j) visit(i, j);
    }
  }
  out.pairs = samples.size();
  for (auto [da, db] : samples)
    if (da >= min_distance && db >= min_distance) out.multiplicative = std::max({out.multiplicative, db / da, da / db});
  const double k = out.multiplicative;
  for (auto [da, db] : samples) out.additive = std::max({out.additive, db - k * da, da - k * db});
  return out;
}

}  // namespace fillinglab

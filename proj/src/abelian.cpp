#include "fillinglab/abelian.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fillinglab/budget.hpp"

namespace fillinglab {

namespace {

using Matrix = std::vector<IntVec>;

Matrix identity(int n) {
  Matrix m(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_nonneg(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Row/column bookkeeping for the Smith normal form. Row operations on the
// working matrix are mirrored into U (left) and U^{-1} (right).
struct SmithState {
  Matrix a;      // n x r
  Matrix u;      // n x n
  Matrix u_inv;  // n x n
  int n;
  int r;

  void swap_rows(int i, int j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
    for (int k = 0; k < n; ++k) std::swap(u_inv[k][i], u_inv[k][j]);
  }
  // row_i += c * row_j
  void add_row(int i, int j, std::int64_t c) {
    if (c == 0) return;
    for (int k = 0; k < r; ++k) a[i][k] += c * a[j][k];
    for (int k = 0; k < n; ++k) u[i][k] += c * u[j][k];
    for (int k = 0; k < n; ++k) u_inv[k][j] -= c * u_inv[k][i];
  }
  void negate_row(int i) {
    for (auto& x : a[i]) x = -x;
    for (auto& x : u[i]) x = -x;
    for (int k = 0; k < n; ++k) u_inv[k][i] = -u_inv[k][i];
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < n; ++k) std::swap(a[k][i], a[k][j]);
  }
  // col_i += c * col_j
  void add_col(int i, int j, std::int64_t c) {
    if (c == 0) return;
    for (int k = 0; k < n; ++k) a[k][i] += c * a[k][j];
  }
};

}  // namespace

AbelianFactor::AbelianFactor(int num_generators, std::vector<IntVec> relations)
    : num_generators_(num_generators), relations_(std::move(relations)) {
  if (num_generators_ < 0) throw std::invalid_argument("negative generator count");
  for (const auto& rel : relations_) {
    if (static_cast<int>(rel.size()) != num_generators_) {
      throw std::invalid_argument("relation vector has wrong length");
    }
  }
  compute_normal_form();
}

void AbelianFactor::compute_normal_form() {
  const int n = num_generators_;
  std::vector<IntVec> rels;
  for (const auto& rel : relations_) {
    if (std::any_of(rel.begin(), rel.end(), [](std::int64_t x) { return x != 0; })) {
      rels.push_back(rel);
    }
  }
  const int r = static_cast<int>(rels.size());
  SmithState s{Matrix(n, IntVec(r, 0)), identity(n), identity(n), n, r};
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) s.a[i][j] = rels[j][i];

  int t = 0;
  for (; t < std::min(n, r); ++t) {
    // Pick the smallest nonzero entry of the remaining block as pivot.
    int pi = -1, pj = -1;
    for (int i = t; i < n; ++i)
      for (int j = t; j < r; ++j)
        if (s.a[i][j] != 0 && (pi < 0 || std::llabs(s.a[i][j]) < std::llabs(s.a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    s.swap_rows(t, pi);
    s.swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (int i = t + 1; i < n; ++i) {
        if (s.a[i][t] == 0) continue;
        s.add_row(i, t, -floor_div(s.a[i][t], s.a[t][t]));
        if (s.a[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < r; ++j) {
        if (s.a[t][j] == 0) continue;
        s.add_col(j, t, -floor_div(s.a[t][j], s.a[t][t]));
        if (s.a[t][j] != 0) clean = false;
      }
      if (!clean) {
        int bi = t, bj = t;
        for (int i = t + 1; i < n; ++i)
          if (s.a[i][t] != 0 && std::llabs(s.a[i][t]) < std::llabs(s.a[bi][bj])) bi = i, bj = t;
        for (int j = t + 1; j < r; ++j)
          if (s.a[t][j] != 0 && std::llabs(s.a[t][j]) < std::llabs(s.a[bi][bj])) bi = t, bj = j;
        s.swap_rows(t, bi);
        s.swap_cols(t, bj);
        continue;
      }
      // Divisibility of the remaining block by the pivot.
      int bad_row = -1;
      for (int i = t + 1; i < n && bad_row < 0; ++i)
        for (int j = t + 1; j < r; ++j)
          if (s.a[i][j] % s.a[t][t] != 0) {
            bad_row = i;
            break;
          }
      if (bad_row < 0) break;
      s.add_row(t, bad_row, 1);
    }
    if (s.a[t][t] < 0) s.negate_row(t);
  }
  lattice_rank_ = t;
  diagonal_.assign(n, 0);
  torsion_.clear();
  for (int i = 0; i < t; ++i) {
    diagonal_[i] = s.a[i][i];
    if (diagonal_[i] > 1) torsion_.push_back(diagonal_[i]);
  }
  free_rank_ = n - t;
  u_ = std::move(s.u);
  u_inv_ = std::move(s.u_inv);
  rank_one_generator_.clear();
  if (lattice_rank_ == 1) {
    rank_one_generator_.assign(n, 0);
    for (int i = 0; i < n; ++i) rank_one_generator_[i] = diagonal_[0] * u_inv_[i][0];
  }
}

AbelianFactor AbelianFactor::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty factor description");
  if (s == "1") return AbelianFactor(0, {});
  std::vector<std::int64_t> cyclic_orders;  // 0 means infinite cyclic
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '+')) {
    if (part.empty() || part[0] != 'Z') throw std::invalid_argument("bad factor term '" + part + "'");
    if (part == "Z") {
      cyclic_orders.push_back(0);
    } else if (part[1] == '^') {
      int k = std::stoi(part.substr(2));
      if (k < 0) throw std::invalid_argument("bad factor exponent in '" + part + "'");
      for (int i = 0; i < k; ++i) cyclic_orders.push_back(0);
    } else if (part[1] == '/') {
      std::int64_t m = std::stoll(part.substr(2));
      if (m < 2) throw std::invalid_argument("torsion entries must be >= 2 in '" + part + "'");
      cyclic_orders.push_back(m);
    } else {
      throw std::invalid_argument("bad factor term '" + part + "'");
    }
  }
  const int n = static_cast<int>(cyclic_orders.size());
  std::vector<IntVec> rels;
  for (int i = 0; i < n; ++i) {
    if (cyclic_orders[i] == 0) continue;
    IntVec v(n, 0);
    v[i] = cyclic_orders[i];
    rels.push_back(std::move(v));
  }
  return AbelianFactor(n, std::move(rels));
}

std::int64_t AbelianFactor::order() const {
  if (free_rank_ > 0) return 0;
  std::int64_t o = 1;
  for (auto d : torsion_) o *= d;
  return o;
}

IntVec AbelianFactor::reduce(std::span<const std::int64_t> raw) const {
  if (static_cast<int>(raw.size()) != num_generators_) {
    throw std::invalid_argument("element has wrong number of coordinates");
  }
  const int n = num_generators_;
  IntVec out;
  out.reserve(coord_dim());
  for (int i = 0; i < n; ++i) {
    if (i < lattice_rank_ && diagonal_[i] == 1) continue;
    std::int64_t y = 0;
    for (int k = 0; k < n; ++k) y += u_[i][k] * raw[k];
    if (i < lattice_rank_) y = mod_nonneg(y, diagonal_[i]);
    out.push_back(y);
  }
  return out;
}

IntVec AbelianFactor::lift(std::span<const std::int64_t> canon) const {
  const int n = num_generators_;
  IntVec y(n, 0);
  std::size_t c = 0;
  for (int i = 0; i < n; ++i) {
    if (i < lattice_rank_ && diagonal_[i] == 1) continue;
    y[i] = canon[c++];
  }
  IntVec raw(n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) raw[i] += u_inv_[i][k] * y[k];
  return raw;
}

IntVec AbelianFactor::add(const IntVec& a, const IntVec& b) const {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] + b[i];
    if (i < torsion_.size()) out[i] = mod_nonneg(out[i], torsion_[i]);
  }
  return out;
}

IntVec AbelianFactor::negate(const IntVec& a) const {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = i < torsion_.size() ? mod_nonneg(-a[i], torsion_[i]) : -a[i];
  }
  return out;
}

bool AbelianFactor::is_zero(const IntVec& a) const {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

IntVec AbelianFactor::generator(int j, int sign) const {
  IntVec raw(num_generators_, 0);
  raw[j] = sign;
  return reduce(raw);
}

std::int64_t AbelianFactor::lattice_l1_min(const IntVec& raw) const {
  auto l1 = [&](std::int64_t a) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) s += std::llabs(raw[i] + a * rank_one_generator_[i]);
    return s;
  };
  // The objective is convex and piecewise linear in a; the integer minimum
  // sits next to one of the breakpoints.
  std::int64_t best = l1(0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::int64_t b = rank_one_generator_[i];
    if (b == 0) continue;
    const std::int64_t a0 = floor_div(-raw[i], b);
    for (std::int64_t a = a0 - 1; a <= a0 + 1; ++a) best = std::min(best, l1(a));
  }
  return best;
}

void AbelianFactor::grow_to(MetricCache& cache, std::int64_t radius) const {
  if (cache.layers.empty()) {
    cache.layers.push_back({zero()});
    cache.index.emplace(zero(), 0);
  }
  std::vector<IntVec> gens;
  for (int j = 0; j < num_generators_; ++j)
    for (int sign : {1, -1}) {
      IntVec g = generator(j, sign);
      if (!is_zero(g) && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    }
  while (!cache.exhausted && static_cast<std::int64_t>(cache.layers.size()) <= radius) {
    const std::int64_t r = static_cast<std::int64_t>(cache.layers.size());
    std::vector<IntVec> next;
    for (const auto& v : cache.layers.back()) {
      for (const auto& g : gens) {
        IntVec w = add(v, g);
        if (cache.index.emplace(w, r).second) next.push_back(std::move(w));
      }
    }
    if (next.empty()) {
      cache.exhausted = true;
      break;
    }
    if (cache.index.size() > budget::max_group_elements()) {
      throw BudgetExceeded("peripheral ball enumeration exceeds element budget");
    }
    std::sort(next.begin(), next.end());
    cache.layers.push_back(std::move(next));
  }
}

std::int64_t AbelianFactor::word_length(const IntVec& canon) const {
  if (lattice_rank_ == 0) {
    std::int64_t s = 0;
    for (auto x : lift(canon)) s += std::llabs(x);
    return s;
  }
  if (lattice_rank_ == 1) return lattice_l1_min(lift(canon));
  std::lock_guard lock(cache_->mutex);
  for (std::int64_t r = 0;; ++r) {
    grow_to(*cache_, r);
    auto it = cache_->index.find(canon);
    if (it != cache_->index.end()) return it->second;
    if (cache_->exhausted) throw std::logic_error("element not reached in finite factor");
  }
}

std::span<const IntVec> AbelianFactor::sphere(std::int64_t r) const {
  std::lock_guard lock(cache_->mutex);
  grow_to(*cache_, r);
  if (r >= static_cast<std::int64_t>(cache_->layers.size())) return {};
  return cache_->layers[r];
}

std::vector<IntVec> AbelianFactor::ball(std::int64_t radius) const {
  std::vector<IntVec> out;
  for (std::int64_t r = 0; r <= radius; ++r) {
    auto layer = sphere(r);
    if (layer.empty()) break;
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::int64_t AbelianFactor::diameter() const {
  if (!is_finite()) return -1;
  std::lock_guard lock(cache_->mutex);
  grow_to(*cache_, std::numeric_limits<std::int64_t>::max());
  return static_cast<std::int64_t>(cache_->layers.size()) - 1;
}

AbelianFactor AbelianFactor::quotient(const std::vector<IntVec>& kernel) const {
  std::vector<IntVec> rels = relations_;
  for (const auto& k : kernel) {
    if (static_cast<int>(k.size()) != num_generators_) {
      throw std::invalid_argument("kernel vector outside its factor (wrong dimension)");
    }
    rels.push_back(k);
  }
  return AbelianFactor(num_generators_, std::move(rels));
}

std::string AbelianFactor::describe() const {
  std::ostringstream os;
  bool first = true;
  for (auto d : torsion_) {
    os << (first ? "" : "+") << "Z/" << d;
    first = false;
  }
  if (free_rank_ > 0) {
    os << (first ? "" : "+") << "Z";
    if (free_rank_ > 1) os << "^" << free_rank_;
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

}  // namespace fillinglab

#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace fillinglab {

// Exact rational with int64 parts; denominators stay tiny (halves, model units).
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num_(n), den_(d) {  // NOLINT
    if (den_ == 0) throw std::invalid_argument("zero denominator");
    normalize();
  }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(Rational a, Rational b) { return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
  friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend auto operator<=>(Rational a, Rational b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Seeded sampler on the raw mt19937_64 stream (no std distributions, whose
// output is implementation-defined).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do x = gen_();
    while (x >= limit);
    return x % n;
  }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// Runs fn(begin, end) over contiguous chunks of [0, n) on the available
// hardware threads. Callers merge per-chunk results in chunk order.
void parallel_chunks(std::size_t n, std::size_t chunks, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);
std::size_t worker_count();

}  // namespace fillinglab

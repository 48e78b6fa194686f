#pragma once

#include "centrelat/types.hpp"

#include <random>

namespace centrelat {

/// Seeded random source with portable conversions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; the conversions below avoid the implementation-defined
/// std::*_distribution classes, so a seed yields the same instances with
/// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % n);
  }

  /// Uniform integer on [lo, hi].
  long integer(long lo, long hi) {
    return lo + static_cast<long>(index(static_cast<std::size_t>(hi - lo + 1)));
  }

  bool coin(double p = 0.5) { return uniform() < p; }

  double normal() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

  double phase() { return 2.0 * M_PI * uniform(); }

  /// Uniform on the closed unit disc.
  Complex unit_disc() {
    const double r = std::sqrt(uniform());
    return std::polar(r, phase());
  }

  /// A fresh generator whose stream is decorrelated from this one.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace centrelat

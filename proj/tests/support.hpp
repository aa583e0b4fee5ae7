#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include "qwalk/types.hpp"

namespace qwalk::test {

inline constexpr double kPi = std::numbers::pi;

/// Fixed-seed generator for property-style sweeps.
struct Gen {
  std::mt19937_64 engine;
  explicit Gen(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  /// Real normalized coin state (cos a, sin a).
  std::pair<double, double> real_coin() {
    const double a = uniform(-kPi, kPi);
    return {std::cos(a), std::sin(a)};
  }
  /// Non-zero wavenumber of either sign.
  double wavenumber() {
    const double k = uniform(0.05, 10.0);
    return uniform(0.0, 1.0) < 0.5 ? -k : k;
  }
};

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double max_abs(std::span<const Complex> a) {
  double worst = 0.0;
  for (const auto& v : a) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace qwalk::test

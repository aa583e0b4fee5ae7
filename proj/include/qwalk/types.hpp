#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace qwalk {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Coin-basis amplitude pair (|R>, |L>) attached to a spatial state.
struct CoinPair {
  Complex r{};
  Complex l{};

  double norm_squared() const { return std::norm(r) + std::norm(l); }
};

inline CoinPair operator+(const CoinPair& a, const CoinPair& b) { return {a.r + b.r, a.l + b.l}; }
inline CoinPair operator*(Complex s, const CoinPair& v) { return {s * v.r, s * v.l}; }

/// Dense 2x2 complex matrix, row-major, acting on (|R>, |L>) column vectors.
struct Mat2 {
  std::array<std::array<Complex, 2>, 2> m{};

  static Mat2 identity() { return Mat2{{{{1.0, 0.0}, {0.0, 1.0}}}}; }

  Complex& operator()(int row, int col) { return m[row][col]; }
  const Complex& operator()(int row, int col) const { return m[row][col]; }

  Mat2 adjoint() const {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.m[i][j] = std::conj(m[j][i]);
    return out;
  }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return out;
}

inline CoinPair operator*(const Mat2& a, const CoinPair& v) {
  return {a.m[0][0] * v.r + a.m[0][1] * v.l, a.m[1][0] * v.r + a.m[1][1] * v.l};
}

/// Largest elementwise deviation of M M^dagger from the identity.
inline double unitarity_defect(const Mat2& a) {
  const Mat2 p = a * a.adjoint();
  const Mat2 id = Mat2::identity();
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(p.m[i][j] - id.m[i][j]));
  return worst;
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(a.m[i][j] - b.m[i][j]));
  return worst;
}

/// Reduce a plane-wave phase offset into the principal window (-pi/|k|, pi/|k|].
/// Offsets differing by a multiple of 2pi/k describe the same wave.
inline double canonical_offset(double offset, double k) {
  const double period = 2.0 * std::numbers::pi / std::abs(k);
  const double half = 0.5 * period;
  double r = std::remainder(offset, period);  // in [-half, half]
  if (r <= -half) r += period;
  return r;
}

}  // namespace qwalk

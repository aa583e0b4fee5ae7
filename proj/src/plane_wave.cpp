#include "qwalk/plane_wave.hpp"

#include <stdexcept>

namespace qwalk {

namespace {
constexpr double kDegenerate = 1e-14;
}

PlaneWaveMode combine_modes(double A, double a, double B, double b, double k) {
  if (A < 0.0 || B < 0.0) throw std::invalid_argument("mode amplitudes must be non-negative");
  if (k == 0.0) throw std::invalid_argument("wavenumber must be non-zero");
  PlaneWaveMode out;
  out.k = k;
  const double c2 = A * A + B * B + 2.0 * A * B * std::cos(k * (a - b));
  out.amplitude = std::sqrt(std::max(c2, 0.0));
  if (out.amplitude < kDegenerate) {
    out.amplitude = 0.0;
    out.cancelled = true;
    return out;
  }
  const double alpha = A * std::sin(k * a) + B * std::sin(k * b);
  const double beta = A * std::cos(k * a) + B * std::cos(k * b);
  out.offset = canonical_offset(std::atan2(alpha, beta) / k, k);
  return out;
}

CoinPair MeasuredStepResult::branch_amplitudes() const {
  return {std::polar(std::sqrt(p_r), k * l1), std::polar(std::sqrt(p_l), k * l2)};
}

MeasuredStepResult measured_step(double a_r, double a_l, double theta, double k, double l) {
  if (std::abs(a_r * a_r + a_l * a_l - 1.0) > 1e-12) throw std::invalid_argument("coin state must be normalized");
  if (k == 0.0) throw std::invalid_argument("wavenumber must be non-zero");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double ckl = std::cos(k * l);
  const double skl = std::sin(k * l);
  const double cross = 2.0 * a_r * a_l * s * c * std::cos(2.0 * k * l);

  MeasuredStepResult out;
  out.k = k;
  out.p_r = a_r * a_r * c * c + a_l * a_l * s * s - cross;
  out.p_l = a_r * a_r * s * s + a_l * a_l * c * c + cross;

  // Numerator and denominator of the tan relations, kept signed for atan2.
  const double r_im = -(a_r * c + a_l * s) * skl;
  const double r_re = (a_r * c - a_l * s) * ckl;
  const double l_im = (-a_r * s + a_l * c) * skl;
  const double l_re = (a_r * s + a_l * c) * ckl;

  if (out.p_r < kDegenerate) {
    out.l1_defined = false;
  } else {
    out.l1 = canonical_offset(std::atan2(r_im, r_re) / k, k);
  }
  if (out.p_l < kDegenerate) {
    out.l2_defined = false;
  } else {
    out.l2 = canonical_offset(std::atan2(l_im, l_re) / k, k);
  }
  return out;
}

Moments measured_moments(const MeasuredStepResult& step, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("step count must be non-negative");
  const double n = static_cast<double>(t);
  const double d = step.l1 - step.l2;
  return {n * (step.p_r * step.l1 + step.p_l * step.l2), n * step.p_r * step.p_l * d * d};
}

std::vector<MeasuredStepResult> measured_schedule(double a_r, double a_l, std::span<const double> thetas,
                                                  double k, double l) {
  std::vector<MeasuredStepResult> out;
  out.reserve(thetas.size());
  for (double th : thetas) out.push_back(measured_step(a_r, a_l, th, k, l));
  return out;
}

Moments schedule_moments(std::span<const MeasuredStepResult> steps) {
  Moments m;
  for (const auto& s : steps) {
    const Moments one = measured_moments(s, 1);
    m.mean += one.mean;
    m.variance += one.variance;
  }
  return m;
}

std::vector<ScanRow> displacement_scan(ScanAxis axis, const ScanParams& fixed, double lo, double hi,
                                       std::size_t samples, bool include_end) {
  if (samples < 2) throw std::invalid_argument("scan needs at least two samples");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw std::invalid_argument("scan range must be finite and increasing");
  if (std::abs(fixed.a_r * fixed.a_r + fixed.a_l * fixed.a_l - 1.0) > 1e-12)
    throw std::invalid_argument("coin state must be normalized");
  const double denom = static_cast<double>(include_end ? samples - 1 : samples);
  std::vector<ScanRow> rows(samples);
  // Rows are independent; each slot is written by exactly one iteration.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(samples); ++i) {
    const double v = lo + (hi - lo) * static_cast<double>(i) / denom;
    ScanParams p = fixed;
    (axis == ScanAxis::Theta ? p.theta : p.k) = v;
    ScanRow row;
    row.axis = v;
    if (p.k == 0.0) {
      row.degenerate = true;
    } else {
      const MeasuredStepResult r = measured_step(p.a_r, p.a_l, p.theta, p.k, p.l);
      row.l1 = r.l1;
      row.l2 = r.l2;
      row.p_r = r.p_r;
      row.p_l = r.p_l;
      row.degenerate = !(r.l1_defined && r.l2_defined);
    }
    rows[static_cast<std::size_t>(i)] = row;
  }
  return rows;
}

}  // namespace qwalk

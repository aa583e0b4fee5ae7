#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

/// amplitude * e^{ik(x + offset)}; offset is kept in (-pi/|k|, pi/|k|].
struct PlaneWaveMode {
  double amplitude = 0.0;
  double k = 0.0;
  double offset = 0.0;
  /// Set when the amplitude cancelled below 1e-14; the offset is then reported as 0.
  bool cancelled = false;
};

/// A e^{ik(x+a)} + B e^{ik(x+b)} as a single mode of the same k.
PlaneWaveMode combine_modes(double A, double a, double B, double b, double k);

/// Outcome of one measured step on the mode e^{ikx} with real coin state (a_R, a_L):
/// after the step the R branch is sqrt(p_r) e^{ik(x+l1)} and the L branch sqrt(p_l) e^{ik(x+l2)}.
struct MeasuredStepResult {
  double k = 0.0;
  double p_r = 0.0;
  double l1 = 0.0;
  double p_l = 0.0;
  double l2 = 0.0;
  /// False when the branch probability is below 1e-14 (offset undefined, reported as 0).
  bool l1_defined = true;
  bool l2_defined = true;

  /// sqrt(p) e^{ik l} for each branch.
  CoinPair branch_amplitudes() const;
};

/// Closed-form single measured step. Throws std::invalid_argument when
/// a_r^2 + a_l^2 deviates from 1 by more than 1e-12 or k == 0.
MeasuredStepResult measured_step(double a_r, double a_l, double theta, double k, double l);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the accumulated phase displacement after t measured steps.
Moments measured_moments(const MeasuredStepResult& step, std::int64_t t);

/// Step-by-step evaluation for a per-step schedule of coin angles; one entry per step.
std::vector<MeasuredStepResult> measured_schedule(double a_r, double a_l, std::span<const double> thetas,
                                                  double k, double l);

/// Moments of the total displacement for independent steps with varying angles.
Moments schedule_moments(std::span<const MeasuredStepResult> steps);

enum class ScanAxis { Theta, K };

struct ScanParams {
  double a_r = 1.0 / std::numbers::sqrt2;
  double a_l = 1.0 / std::numbers::sqrt2;
  double theta = 0.0;
  double k = 1.0;
  double l = 0.01;
};

struct ScanRow {
  double axis = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double p_r = 0.0;
  double p_l = 0.0;
  bool degenerate = false;
};

/// Evaluate measured_step along one axis. With include_end the samples span [lo, hi],
/// otherwise [lo, hi). Samples must be >= 2; k-scans must not hit k = 0.
std::vector<ScanRow> displacement_scan(ScanAxis axis, const ScanParams& fixed, double lo, double hi,
                                       std::size_t samples, bool include_end = true);

}  // namespace qwalk

#pragma once

// Brute-force reference engines. These are deliberately slow and literal: they share
// nothing with the closed forms except the definition of the one-step mode operator.

#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk::oracle {

/// E'^t v for the mode operator R(theta) S at wavenumber k. Up to 1000 steps the vector is
/// multiplied step by step; beyond that the operator is diagonalized numerically and the
/// eigenvalues are raised to the t-th power by phase arithmetic.
CoinPair mode_matrix_power(CoinPair start, double k, double l, double theta, std::int64_t t);

inline CoinPair mode_matrix_power(Complex a_r, Complex a_l, double k, double l, double theta, std::int64_t t) {
  return mode_matrix_power(CoinPair{a_r, a_l}, k, l, theta, t);
}

inline constexpr std::int64_t kDirectPowerLimit = 1000;

/// Branch amplitudes of one measured step on e^{ikx}, by direct evaluation of R(theta) U.
CoinPair measured_branches_direct(CoinPair coin, double k, double l, double theta);

/// Coin pair per lattice site; site j sits at x = origin + j * spacing.
struct LatticeField {
  double spacing = 0.0;
  double origin = 0.0;
  std::vector<CoinPair> sites;

  /// sum |.|^2 * spacing
  double norm_squared() const;
};

enum class MeasureMode {
  Coherent,    // no measurement
  Sample,      // sample the coin outcome from the seeded generator
  ForceLeft,   // post-select |L> at every step
  ForceRight,  // post-select |R> at every step
};

struct LatticeRun {
  LatticeField field;
  /// 'R' / 'L' per step; empty for coherent runs.
  std::vector<char> record;
  /// Probability of the recorded outcome at each step.
  std::vector<double> outcome_probability;
};

/// Applies shift then R(theta) literally on the sampled field, t times. Measuring modes
/// project the coin after each step, renormalize, and re-initialize the coin to `reinit`
/// before the next step; the returned field is the projected one of the last step.
/// Throws std::invalid_argument when l is not an integer multiple of the spacing.
LatticeRun lattice_evolve(const LatticeField& field, CoinPair reinit, double theta, double l, std::int64_t t,
                          MeasureMode mode, std::uint64_t seed = 0);

/// Same with a per-step angle schedule (t = thetas.size()).
LatticeRun lattice_evolve(const LatticeField& field, CoinPair reinit, std::span<const double> thetas, double l,
                          MeasureMode mode, std::uint64_t seed = 0);

struct SampleStatistics {
  double mean = 0.0;
  double variance = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Statistics of a sampled integer-valued quantity x = offset + scale * n from a histogram over n.
SampleStatistics statistics_from_histogram(std::span<const std::uint64_t> hist, double offset, double scale);

/// Sampled phase displacement n l1 + (t - n) l2 with n ~ Binomial(t, p_r), drawn as t
/// Bernoulli trials per trajectory. Requires n_samples >= 10^4.
SampleStatistics monte_carlo_measured_mode(double p_r, double l1, double l2, std::int64_t t, std::uint64_t n_samples,
                                           std::uint64_t seed);

/// Particle walk with the coin measured after every coin toss: the coin collapses onto the
/// observed direction and the particle moves one site (times step_length) that way.
SampleStatistics monte_carlo_particle_walk(const Mat2& coin, CoinPair start, std::int64_t t, std::uint64_t n_samples,
                                           std::uint64_t seed, double step_length = 1.0);

struct BranchCheck {
  double max_probability_deviation = 0.0;
  double max_amplitude_deviation = 0.0;
  double probability_sum = 0.0;
  /// n of the worst amplitude mismatch, for reporting.
  std::int64_t worst_n = 0;
};

/// Compares the binomial branch table built from the closed-form measured step with a
/// step-by-step composition of directly evaluated branch amplitudes. Real coin, t <= 30.
BranchCheck binomial_branch_check(double a_r, double a_l, double theta, double k, double l, std::int64_t t);

}  // namespace qwalk::oracle

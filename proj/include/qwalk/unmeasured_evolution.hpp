#pragma once

#include <cstdint>

#include "qwalk/types.hpp"

namespace qwalk {

/// One coherent step R(theta) * S on the mode e^{ikx}:
/// [[e^{-ikl} cos, -e^{ikl} sin], [e^{-ikl} sin, e^{ikl} cos]].
Mat2 step_operator(double k, double l, double theta);

/// Eigen-structure of step_operator. lambda1 = -i e^{i alpha}, lambda2 = i e^{-i alpha},
/// Q = sqrt(sin^2(kl) cos^2(theta) + sin^2(theta)).
struct SpectralDecomposition {
  double alpha = 0.0;
  double q = 0.0;
  Complex lambda1{};
  Complex lambda2{};
  /// Unnormalized eigenvector components (a, b1) and (a, b2) in closed form.
  Complex a{};
  Complex b1{};
  Complex b2{};
  /// Unit eigenvectors paired with lambda1 / lambda2. Fall back to the other row of
  /// the eigen-equation when (a, b) collapses (sin theta -> 0).
  CoinPair v1{};
  CoinPair v2{};
  /// Q <= 1e-14: the operator is diagonal and the values come from its diagonal.
  bool degenerate = false;
};

SpectralDecomposition eigensystem(double k, double l, double theta);

struct ModeEvolutionInput {
  double a_r = 1.0;
  double a_l = 0.0;
  double k = 1.0;
  double l = 0.01;
  double theta = 0.0;
  std::int64_t t = 0;
  double l0 = 0.0;
};

/// phi_R = sqrt(p1) e^{ik(-l0 + l1)}, phi_L = sqrt(p2) e^{ik(-l0 + l2)}: the coefficients of
/// e^{ikx} in each coin component after t coherent steps.
struct ModeEvolutionResult {
  double p1 = 0.0;
  double l1 = 0.0;
  double p2 = 0.0;
  double l2 = 0.0;
  Complex phi_r{};
  Complex phi_l{};
  /// L1/L2 are meaningless at k == 0 or vanishing branch probability.
  bool l1_defined = true;
  bool l2_defined = true;
  /// True when the degenerate-Q case was delegated to the matrix-power route.
  bool via_oracle = false;
};

/// Parity-split closed form. Throws std::invalid_argument on t < 0 or unnormalized coin.
ModeEvolutionResult evolve_mode_closed_form(const ModeEvolutionInput& in);

/// Direct matrix-power evaluation (see oracle::mode_matrix_power).
ModeEvolutionResult evolve_mode_oracle(const ModeEvolutionInput& in);

/// Fills the (P, L) view from complex amplitudes given the initial offset.
ModeEvolutionResult mode_result_from_amplitudes(Complex phi_r, Complex phi_l, double k, double l0);

}  // namespace qwalk

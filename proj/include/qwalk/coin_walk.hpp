#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

/// Phase parameters of the general coin
///   C = e^{i eta}/sqrt2 * diag(e^{i phi}, e^{-i phi})
///       * [[e^{i theta}, e^{-i theta}], [e^{i theta}, -e^{-i theta}]]
///       * diag(e^{i varphi}, e^{-i varphi}).
/// All zero gives the Hadamard coin.
struct CoinAngles {
  double eta = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double varphi = 0.0;
};

/// A coin operator: either the angle-parametrized general coin or an explicit unitary.
class CoinSpec {
 public:
  CoinSpec() = default;
  explicit CoinSpec(CoinAngles angles) : repr_(angles) {}

  static CoinSpec hadamard() { return CoinSpec(CoinAngles{}); }
  /// Real rotation R(theta) = [[cos, -sin], [sin, cos]].
  static CoinSpec rotation(double theta);
  /// Explicit matrix; throws std::invalid_argument if not unitary to 1e-12.
  static CoinSpec from_matrix(const Mat2& m);

  const std::variant<CoinAngles, Mat2>& repr() const { return repr_; }

 private:
  std::variant<CoinAngles, Mat2> repr_{CoinAngles{}};
};

Mat2 coin_matrix(const CoinSpec& spec);

enum class OperatorOrder { CoinThenShift, ShiftThenCoin };

/// Coin-resolved amplitudes on a dense window of lattice sites.
/// Site s sits at physical position s * step_length.
class LatticeWalkState {
 public:
  LatticeWalkState(std::int64_t first_site, std::vector<CoinPair> amplitudes, double step_length);

  /// Particle localized at `site` with the given coin state.
  static LatticeWalkState point(std::int64_t site, CoinPair coin, double step_length = 1.0);

  std::int64_t first_site() const { return first_site_; }
  std::int64_t last_site() const { return first_site_ + static_cast<std::int64_t>(amps_.size()) - 1; }
  double step_length() const { return step_length_; }
  const std::vector<CoinPair>& amplitudes() const { return amps_; }

  /// Zero outside the stored window.
  CoinPair amplitude(std::int64_t site) const;
  double probability(std::int64_t site) const { return amplitude(site).norm_squared(); }
  double norm_squared() const;

 private:
  std::int64_t first_site_;
  std::vector<CoinPair> amps_;
  double step_length_;
};

LatticeWalkState walk_step(const LatticeWalkState& state, const Mat2& coin, OperatorOrder order);
LatticeWalkState walk_step(const LatticeWalkState& state, const CoinSpec& coin, OperatorOrder order);

/// Exact inverse of walk_step (adjoint coin, reversed shift, reversed order).
LatticeWalkState walk_step_inverse(const LatticeWalkState& state, const Mat2& coin, OperatorOrder order);

LatticeWalkState walk_evolve(const LatticeWalkState& state, const CoinSpec& coin, OperatorOrder order,
                             std::int64_t steps);

struct PositionStatistics {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the position distribution in physical units.
PositionStatistics position_statistics(const LatticeWalkState& state);

}  // namespace qwalk

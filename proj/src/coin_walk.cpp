#include "qwalk/coin_walk.hpp"

#include <stdexcept>

namespace qwalk {

namespace {

Mat2 diag_phase(double angle) {
  Mat2 d;
  d(0, 0) = std::polar(1.0, angle);
  d(1, 1) = std::polar(1.0, -angle);
  return d;
}

// Second row carries the conjugate phases of the first so the core is unitary for every theta.
Mat2 angles_matrix(const CoinAngles& a) {
  Mat2 core;
  core(0, 0) = std::polar(1.0, a.theta);
  core(0, 1) = std::polar(1.0, -a.theta);
  core(1, 0) = std::polar(1.0, a.theta);
  core(1, 1) = -std::polar(1.0, -a.theta);
  Mat2 out = diag_phase(a.phi) * core * diag_phase(a.varphi);
  const Complex prefactor = std::polar(1.0 / std::numbers::sqrt2, a.eta);
  for (auto& row : out.m)
    for (auto& v : row) v *= prefactor;
  return out;
}

// Moves R one site right and L one site left; the window grows by one site each side.
LatticeWalkState conditional_shift(const LatticeWalkState& s, int right_sign) {
  const auto& in = s.amplitudes();
  std::vector<CoinPair> out(in.size() + 2);
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i + 1 + right_sign].r += in[i].r;
    out[i + 1 - right_sign].l += in[i].l;
  }
  return LatticeWalkState(s.first_site() - 1, std::move(out), s.step_length());
}

LatticeWalkState apply_coin(LatticeWalkState s, const Mat2& c) {
  std::vector<CoinPair> amps = s.amplitudes();
  for (auto& a : amps) a = c * a;
  return LatticeWalkState(s.first_site(), std::move(amps), s.step_length());
}

}  // namespace

CoinSpec CoinSpec::rotation(double theta) {
  Mat2 r;
  r(0, 0) = std::cos(theta);
  r(0, 1) = -std::sin(theta);
  r(1, 0) = std::sin(theta);
  r(1, 1) = std::cos(theta);
  CoinSpec out;
  out.repr_ = r;
  return out;
}

CoinSpec CoinSpec::from_matrix(const Mat2& m) {
  if (!(unitarity_defect(m) <= 1e-12)) throw std::invalid_argument("coin matrix is not unitary");
  CoinSpec out;
  out.repr_ = m;
  return out;
}

Mat2 coin_matrix(const CoinSpec& spec) {
  if (const auto* a = std::get_if<CoinAngles>(&spec.repr())) return angles_matrix(*a);
  return std::get<Mat2>(spec.repr());
}

LatticeWalkState::LatticeWalkState(std::int64_t first_site, std::vector<CoinPair> amplitudes, double step_length)
    : first_site_(first_site), amps_(std::move(amplitudes)), step_length_(step_length) {
  if (!(step_length > 0.0)) throw std::invalid_argument("step length must be positive");
  if (amps_.empty()) throw std::invalid_argument("lattice window must hold at least one site");
}

LatticeWalkState LatticeWalkState::point(std::int64_t site, CoinPair coin, double step_length) {
  return LatticeWalkState(site, {coin}, step_length);
}

CoinPair LatticeWalkState::amplitude(std::int64_t site) const {
  if (site < first_site_ || site > last_site()) return {};
  return amps_[static_cast<std::size_t>(site - first_site_)];
}

double LatticeWalkState::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amps_) n += a.norm_squared();
  return n;
}

LatticeWalkState walk_step(const LatticeWalkState& state, const Mat2& coin, OperatorOrder order) {
  if (order == OperatorOrder::CoinThenShift) return conditional_shift(apply_coin(state, coin), +1);
  return apply_coin(conditional_shift(state, +1), coin);
}

LatticeWalkState walk_step(const LatticeWalkState& state, const CoinSpec& coin, OperatorOrder order) {
  return walk_step(state, coin_matrix(coin), order);
}

LatticeWalkState walk_step_inverse(const LatticeWalkState& state, const Mat2& coin, OperatorOrder order) {
  const Mat2 inv = coin.adjoint();
  if (order == OperatorOrder::CoinThenShift) return apply_coin(conditional_shift(state, -1), inv);
  return conditional_shift(apply_coin(state, inv), -1);
}

LatticeWalkState walk_evolve(const LatticeWalkState& state, const CoinSpec& coin, OperatorOrder order,
                             std::int64_t steps) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  const Mat2 c = coin_matrix(coin);
  LatticeWalkState s = state;
  for (std::int64_t i = 0; i < steps; ++i) s = walk_step(s, c, order);
  return s;
}

PositionStatistics position_statistics(const LatticeWalkState& state) {
  double m1 = 0.0;
  double m2 = 0.0;
  double total = 0.0;
  for (std::int64_t s = state.first_site(); s <= state.last_site(); ++s) {
    const double p = state.probability(s);
    const double x = static_cast<double>(s) * state.step_length();
    total += p;
    m1 += x * p;
    m2 += x * x * p;
  }
  m1 /= total;
  m2 /= total;
  return {m1, m2 - m1 * m1};
}

}  // namespace qwalk

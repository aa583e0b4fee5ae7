#include "qwalk/unmeasured_evolution.hpp"

#include <stdexcept>

#include "qwalk/oracle.hpp"

namespace qwalk {

namespace {

constexpr double kDegenerateQ = 1e-14;
constexpr double kUndefinedProbability = 1e-14;

CoinPair unit(CoinPair v) {
  const double n = std::sqrt(v.norm_squared());
  return (1.0 / n) * v;
}

// Eigenvector of m for eigenvalue lambda, taken from whichever row of (m - lambda) is better conditioned.
CoinPair eigenvector_from_rows(const Mat2& m, Complex lambda) {
  const CoinPair top{m(0, 1), lambda - m(0, 0)};
  const CoinPair bottom{lambda - m(1, 1), m(1, 0)};
  return unit(top.norm_squared() >= bottom.norm_squared() ? top : bottom);
}

Complex i_pow(std::int64_t t) {
  switch (((t % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

Mat2 step_operator(double k, double l, double theta) {
  const Complex back = std::polar(1.0, -k * l);
  const Complex fwd = std::polar(1.0, k * l);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 m;
  m(0, 0) = back * c;
  m(0, 1) = -fwd * s;
  m(1, 0) = back * s;
  m(1, 1) = fwd * c;
  return m;
}

SpectralDecomposition eigensystem(double k, double l, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double skl = std::sin(k * l);
  const double ckl = std::cos(k * l);
  const Mat2 m = step_operator(k, l, theta);

  SpectralDecomposition out;
  out.q = std::sqrt(skl * skl * c * c + s * s);
  if (out.q <= kDegenerateQ) {
    out.degenerate = true;
    out.lambda1 = m(0, 0);
    out.lambda2 = m(1, 1);
    out.alpha = std::arg(out.lambda1 * kI);  // lambda1 = -i e^{i alpha}
    out.v1 = {1.0, 0.0};
    out.v2 = {0.0, 1.0};
    return out;
  }
  out.alpha = std::atan(ckl * c / out.q);
  out.lambda1 = -kI * std::polar(1.0, out.alpha);
  out.lambda2 = kI * std::polar(1.0, -out.alpha);

  // sqrt((e^{ikl} - e^{-ikl})^2 cos^2 - 4 sin^2) = sqrt(-4 Q^2), branch 2iQ to match lambda1.
  const Complex root = 2.0 * kI * out.q;
  const Complex diff = 2.0 * kI * skl;  // e^{ikl} - e^{-ikl}
  out.a = std::polar(1.0, k * l) * s;
  out.b1 = -0.5 * diff * c + 0.5 * root;
  out.b2 = -0.5 * diff * c - 0.5 * root;

  const CoinPair raw1{out.a, out.b1};
  const CoinPair raw2{out.a, out.b2};
  constexpr double kCollapsed = 1e-8;
  out.v1 = raw1.norm_squared() > kCollapsed ? unit(raw1) : eigenvector_from_rows(m, out.lambda1);
  out.v2 = raw2.norm_squared() > kCollapsed ? unit(raw2) : eigenvector_from_rows(m, out.lambda2);
  return out;
}

ModeEvolutionResult mode_result_from_amplitudes(Complex phi_r, Complex phi_l, double k, double l0) {
  ModeEvolutionResult out;
  out.phi_r = phi_r;
  out.phi_l = phi_l;
  out.p1 = std::norm(phi_r);
  out.p2 = std::norm(phi_l);
  out.l1_defined = k != 0.0 && out.p1 >= kUndefinedProbability;
  out.l2_defined = k != 0.0 && out.p2 >= kUndefinedProbability;
  if (out.l1_defined) out.l1 = canonical_offset(std::arg(phi_r) / k + l0, k);
  if (out.l2_defined) out.l2 = canonical_offset(std::arg(phi_l) / k + l0, k);
  return out;
}

ModeEvolutionResult evolve_mode_closed_form(const ModeEvolutionInput& in) {
  if (in.t < 0) throw std::invalid_argument("step count must be non-negative");
  if (std::abs(in.a_r * in.a_r + in.a_l * in.a_l - 1.0) > 1e-12)
    throw std::invalid_argument("coin state must be normalized");

  const SpectralDecomposition eig = eigensystem(in.k, in.l, in.theta);
  if (eig.degenerate) return evolve_mode_oracle(in);

  const double c = std::cos(in.theta);
  const double s = std::sin(in.theta);
  const double skl = std::sin(in.k * in.l);
  const double ckl = std::cos(in.k * in.l);
  const double q = eig.q;
  const double ta = static_cast<double>(in.t) * eig.alpha;
  const double cta = std::cos(ta);
  const double sta = std::sin(ta);
  const double ar = in.a_r;
  const double al = in.a_l;

  // (re, im) of phi_R and phi_L with the i^t factor stripped.
  double rr, ri, lr, li;
  if (in.t % 2 == 0) {
    rr = ar * cta + al * ckl * s * sta / q;               // A
    ri = (ar * c + al * s) * skl * sta / q;              // B
    lr = al * cta - ar * ckl * s * sta / q;              // C
    li = (ar * s - al * c) * skl * sta / q;              // D
  } else {
    rr = -(ar * c + al * s) * skl * cta / q;             // E
    ri = -ar * sta + al * ckl * s * cta / q;             // F
    lr = (-ar * s + al * c) * skl * cta / q;             // G
    li = -al * sta - ar * ckl * s * cta / q;             // H
  }

  // e^{ik(-l0 + L)} = i^t e^{i atan2(num, den)} e^{-ik l0}.
  const Complex shift = i_pow(in.t) * std::polar(1.0, -in.k * in.l0);
  ModeEvolutionResult out;
  out.phi_r = shift * Complex(rr, ri);
  out.phi_l = shift * Complex(lr, li);
  out.p1 = rr * rr + ri * ri;
  out.p2 = lr * lr + li * li;
  out.l1_defined = in.k != 0.0 && out.p1 >= kUndefinedProbability;
  out.l2_defined = in.k != 0.0 && out.p2 >= kUndefinedProbability;
  const double quarter_turns = static_cast<double>(in.t % 4) * std::numbers::pi / 2.0;
  if (out.l1_defined) out.l1 = canonical_offset((std::atan2(ri, rr) + quarter_turns) / in.k, in.k);
  if (out.l2_defined) out.l2 = canonical_offset((std::atan2(li, lr) + quarter_turns) / in.k, in.k);
  return out;
}

ModeEvolutionResult evolve_mode_oracle(const ModeEvolutionInput& in) {
  if (in.t < 0) throw std::invalid_argument("step count must be non-negative");
  const CoinPair start = std::polar(1.0, -in.k * in.l0) * CoinPair{in.a_r, in.a_l};
  const CoinPair out = oracle::mode_matrix_power(start, in.k, in.l, in.theta, in.t);
  ModeEvolutionResult r = mode_result_from_amplitudes(out.r, out.l, in.k, in.l0);
  r.via_oracle = true;
  return r;
}

}  // namespace qwalk

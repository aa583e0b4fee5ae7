#include "qwalk/wave_packet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwalk/oracle.hpp"
#include "qwalk/unmeasured_evolution.hpp"

namespace qwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDecay = 1e-8;
constexpr double kCaptureDeficit = 1e-10;

void exp_sum(Backend backend, const kernels::UniformAxis& source, std::span<const Complex> coeff,
             const kernels::UniformAxis& target, int sign, std::span<Complex> out) {
  if (backend == Backend::Serial)
    kernels::exp_sum_serial(source, coeff, target, sign, out);
  else
    kernels::exp_sum_parallel(source, coeff, target, sign, out);
}

// sqrt(p) e^{ik l} for both measured branches. At k = 0 the offsets are undefined but the
// amplitudes are the real, signed coin components.
CoinPair closed_form_branches(double a_r, double a_l, double theta, double k, double l) {
  if (k == 0.0) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {a_r * c - a_l * s, a_r * s + a_l * c};
  }
  return measured_step(a_r, a_l, theta, k, l).branch_amplitudes();
}

constexpr double kRoundoffFloor = 1e-14;

// Spectral amplitudes of the input, with the grid checks every evolution entry point needs.
Spectrum checked_spectrum(const Packet& packet, const SpectralGrid& spectral) {
  Spectrum spec = forward_transform(packet, spectral);
  const double norm = norm_squared(packet.grid, packet.samples);
  if (norm > 0.0 && spectral_capture(spec, norm) < 1.0 - kCaptureDeficit)
    throw GridError("spectral window [" + std::to_string(spectral.k_min) + ", " + std::to_string(spectral.k_max) +
                    "] misses part of the packet spectrum; widen it");
  // Transform round-off sits near 1e-17; post-selected histories amplify high k by many
  // orders of magnitude, so weights at that floor are zeroed rather than amplified.
  double top = 0.0;
  for (const auto& w : spec.weights) top = std::max(top, std::abs(w));
  for (auto& w : spec.weights)
    if (std::abs(w) < kRoundoffFloor * top) w = 0.0;
  return spec;
}

std::vector<Complex> synthesize(const SpectralGrid& spectral, std::span<const Complex> amplitudes,
                                const SpatialGrid& grid) {
  std::vector<Complex> coeff(spectral.n_modes);
  for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] = spectral.weight(i) * amplitudes[i];
  std::vector<Complex> out(grid.n_points);
  exp_sum(Backend::Parallel, spectral.axis(), coeff, grid.axis(), +1, out);
  return out;
}

void validate_state(const WavePacketState& s) {
  double peak = 0.0;
  for (const auto& v : s.field_r) peak = std::max(peak, std::abs(v));
  for (const auto& v : s.field_l) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return;
  const double edge = std::max({std::abs(s.field_r.front()), std::abs(s.field_r.back()), std::abs(s.field_l.front()),
                                std::abs(s.field_l.back())});
  if (edge > kDecay * peak)
    throw GridError("evolved packet reaches the spatial grid boundary (edge/peak = " + std::to_string(edge / peak) +
                    "); widen the grid");
}

void validate_spectral_edges(std::span<const double> log_mag) {
  const double top = *std::max_element(log_mag.begin(), log_mag.end());
  if (!std::isfinite(top)) return;
  const double edge = std::max(log_mag.front(), log_mag.back());
  if (edge - top > std::log(kDecay)) throw GridError("evolved spectrum reaches the spectral window edge; widen it");
}

double binomial(std::int64_t t, std::int64_t n) {
  return std::exp(std::lgamma(static_cast<double>(t + 1)) - std::lgamma(static_cast<double>(n + 1)) -
                  std::lgamma(static_cast<double>(t - n + 1)));
}

}  // namespace

SpatialGrid SpatialGrid::make(double x_min, double x_max, std::size_t n_points) {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw std::invalid_argument("spatial grid needs finite x_min < x_max");
  if (n_points < 2) throw std::invalid_argument("spatial grid needs at least two points");
  return {x_min, x_max, n_points};
}

SpectralGrid SpectralGrid::make(double k_min, double k_max, std::size_t n_modes) {
  if (!(k_min < k_max) || !std::isfinite(k_min) || !std::isfinite(k_max))
    throw std::invalid_argument("spectral grid needs finite k_min < k_max");
  if (n_modes < 2) throw std::invalid_argument("spectral grid needs at least two nodes");
  return {k_min, k_max, n_modes};
}

double WavePacketState::norm_squared() const {
  return qwalk::norm_squared(grid, field_r) + qwalk::norm_squared(grid, field_l);
}

Packet gaussian_packet(const SpatialGrid& grid, double width, double center) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  Packet p{grid, std::vector<Complex>(grid.n_points)};
  const double scale = 1.0 / std::pow(std::numbers::pi * width * width, 0.25);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double u = (grid.x(i) - center) / width;
    p.samples[i] = scale * std::exp(-0.5 * u * u);
  }
  return p;
}

Packet resample_packet(const SpatialGrid& grid, std::span<const double> x, std::span<const Complex> f) {
  if (x.size() != f.size() || x.size() < 2) throw std::invalid_argument("packet samples need at least two (x, f) pairs");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("packet x values must be strictly increasing");
  Packet p{grid, std::vector<Complex>(grid.n_points)};
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double xi = grid.x(i);
    if (xi < x.front() || xi > x.back()) continue;
    const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xi) - x.begin());
    if (hi >= x.size()) {
      p.samples[i] = f.back();
      continue;
    }
    const std::size_t lo = hi - 1;
    const double w = (xi - x[lo]) / (x[hi] - x[lo]);
    p.samples[i] = (1.0 - w) * f[lo] + w * f[hi];
  }
  return p;
}

double norm_squared(const SpatialGrid& grid, std::span<const Complex> f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += grid.weight(i) * std::norm(f[i]);
  return acc;
}

void validate_boundary_decay(std::span<const Complex> f, double rel, const char* what) {
  double peak = 0.0;
  for (const auto& v : f) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return;
  const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
  if (edge > rel * peak)
    throw GridError(std::string(what) + " does not decay at the grid boundary (edge/peak = " +
                    std::to_string(edge / peak) + "); widen the grid");
}

Spectrum forward_transform(const Packet& packet, const SpectralGrid& spectral, Backend backend) {
  if (packet.samples.size() != packet.grid.n_points) throw std::invalid_argument("packet size does not match its grid");
  validate_boundary_decay(packet.samples, kDecay, "input packet");
  std::vector<Complex> coeff(packet.grid.n_points);
  for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] = (packet.grid.weight(j) / kTwoPi) * packet.samples[j];
  Spectrum out{spectral, std::vector<Complex>(spectral.n_modes)};
  exp_sum(backend, packet.grid.axis(), coeff, spectral.axis(), -1, out.weights);
  return out;
}

Packet inverse_transform(const Spectrum& spectrum, const SpatialGrid& grid, Backend backend) {
  if (spectrum.weights.size() != spectrum.grid.n_modes) throw std::invalid_argument("spectrum size does not match its grid");
  std::vector<Complex> coeff(spectrum.grid.n_modes);
  for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] = spectrum.grid.weight(i) * spectrum.weights[i];
  Packet out{grid, std::vector<Complex>(grid.n_points)};
  exp_sum(backend, spectrum.grid.axis(), coeff, grid.axis(), +1, out.samples);
  return out;
}

double spectral_capture(const Spectrum& spectrum, double spatial_norm) {
  double acc = 0.0;
  for (std::size_t i = 0; i < spectrum.weights.size(); ++i) acc += spectrum.grid.weight(i) * std::norm(spectrum.weights[i]);
  return kTwoPi * acc / spatial_norm;
}

SpectralPacket to_spectral(const Packet& packet, const SpectralGrid& spectral) {
  return {packet.grid, checked_spectrum(packet, spectral)};
}

SpectralPacket gaussian_spectral_packet(const SpatialGrid& grid, const SpectralGrid& spectral, double width,
                                        double center) {
  validate_boundary_decay(gaussian_packet(grid, width, center).samples, kDecay, "Gaussian packet");
  Spectrum spec{spectral, std::vector<Complex>(spectral.n_modes)};
  const double scale = std::pow(std::numbers::pi * width * width, -0.25) * width / std::sqrt(kTwoPi);
  for (std::size_t i = 0; i < spectral.n_modes; ++i) {
    const double k = spectral.k(i);
    spec.weights[i] = std::polar(scale * std::exp(-0.5 * k * k * width * width), -k * center);
  }
  validate_boundary_decay(spec.weights, kDecay, "Gaussian spectrum");
  return {grid, std::move(spec)};
}

WavePacketState evolve_unmeasured(const SpectralPacket& src, CoinPair coin, double theta, double l, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("step count must be non-negative");
  const Spectrum& spec = src.spectrum;
  const SpectralGrid& spectral = spec.grid;
  const bool real_coin = coin.r.imag() == 0.0 && coin.l.imag() == 0.0;
  if (real_coin && std::abs(coin.norm_squared() - 1.0) > 1e-12)
    throw std::invalid_argument("coin state must be normalized");

  const auto n = static_cast<std::ptrdiff_t>(spectral.n_modes);
  std::vector<Complex> amp_r(spectral.n_modes);
  std::vector<Complex> amp_l(spectral.n_modes);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const ModeEvolutionInput in{coin.r.real(), coin.l.real(), spectral.k(idx), l, theta, t, 0.0};
    CoinPair evolved;
    if (real_coin) {
      const ModeEvolutionResult r = evolve_mode_closed_form(in);
      evolved = {r.phi_r, r.phi_l};
    } else {
      evolved = oracle::mode_matrix_power(coin, spectral.k(idx), l, theta, t);
    }
    amp_r[idx] = spec.weights[idx] * evolved.r;
    amp_l[idx] = spec.weights[idx] * evolved.l;
  }
  WavePacketState out{src.grid, synthesize(spectral, amp_r, src.grid), synthesize(spectral, amp_l, src.grid)};
  validate_state(out);
  return out;
}

WavePacketState evolve_unmeasured(const Packet& packet, CoinPair coin, double theta, double l, std::int64_t t,
                                  const SpectralGrid& spectral) {
  return evolve_unmeasured(to_spectral(packet, spectral), coin, theta, l, t);
}

MeasuredPacket evolve_measured_all_left(const SpectralPacket& src, double a_r, double a_l, double theta, double l,
                                        std::int64_t t) {
  if (t < 0) throw std::invalid_argument("step count must be non-negative");
  if (std::abs(a_r * a_r + a_l * a_l - 1.0) > 1e-12) throw std::invalid_argument("coin state must be normalized");
  const Spectrum& spec = src.spectrum;
  const SpectralGrid& spectral = spec.grid;

  // Per node: log|f~| + t log|b_L| and phase arg f~ + t arg b_L.
  const std::size_t n = spectral.n_modes;
  std::vector<double> log_mag(n);
  std::vector<double> phase(n);
  const double td = static_cast<double>(t);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex b_l = closed_form_branches(a_r, a_l, theta, spectral.k(i), l).l;
    const double mag_f = std::abs(spec.weights[i]);
    const double mag_b = std::abs(b_l);
    if (mag_f == 0.0 || (mag_b == 0.0 && t > 0)) {
      log_mag[i] = -std::numeric_limits<double>::infinity();
      phase[i] = 0.0;
      continue;
    }
    log_mag[i] = std::log(mag_f) + (t > 0 ? td * std::log(mag_b) : 0.0);
    phase[i] = std::arg(spec.weights[i]) + (t > 0 ? td * std::arg(b_l) : 0.0);
  }
  validate_spectral_edges(log_mag);
  const double top = *std::max_element(log_mag.begin(), log_mag.end());
  if (!std::isfinite(top)) throw std::invalid_argument("the all-left history has zero probability");

  std::vector<Complex> amp(n);
  for (std::size_t i = 0; i < n; ++i)
    amp[i] = std::isfinite(log_mag[i]) ? std::polar(std::exp(log_mag[i] - top), phase[i]) : Complex{};
  std::vector<Complex> field = synthesize(spectral, amp, src.grid);

  const double shifted_norm = norm_squared(src.grid, field);
  const double scale = 1.0 / std::sqrt(shifted_norm);
  for (auto& v : field) v *= scale;

  MeasuredPacket out;
  out.state = WavePacketState{src.grid, std::vector<Complex>(src.grid.n_points), std::move(field)};
  out.log_branch_norm = 2.0 * top + std::log(shifted_norm);
  out.normalization = std::exp(-0.5 * out.log_branch_norm);
  validate_state(out.state);
  return out;
}

MeasuredPacket evolve_measured_all_left(const Packet& packet, double a_r, double a_l, double theta, double l,
                                        std::int64_t t, const SpectralGrid& spectral) {
  return evolve_measured_all_left(to_spectral(packet, spectral), a_r, a_l, theta, l, t);
}

std::vector<Complex> measured_history_field(const SpectralPacket& src, double a_r, double a_l, double theta, double l,
                                            std::int64_t t, std::int64_t n_right) {
  if (t < 0 || n_right < 0 || n_right > t) throw std::invalid_argument("need 0 <= n_right <= t");
  if (std::abs(a_r * a_r + a_l * a_l - 1.0) > 1e-12) throw std::invalid_argument("coin state must be normalized");
  const Spectrum& spec = src.spectrum;
  const SpectralGrid& spectral = spec.grid;
  std::vector<Complex> amp(spectral.n_modes);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const CoinPair b = closed_form_branches(a_r, a_l, theta, spectral.k(i), l);
    amp[i] = spec.weights[i] * std::pow(b.r, static_cast<int>(n_right)) * std::pow(b.l, static_cast<int>(t - n_right));
  }
  return synthesize(spectral, amp, src.grid);
}

std::vector<Complex> measured_history_field(const Packet& packet, double a_r, double a_l, double theta, double l,
                                            std::int64_t t, std::int64_t n_right, const SpectralGrid& spectral) {
  return measured_history_field(to_spectral(packet, spectral), a_r, a_l, theta, l, t, n_right);
}

std::vector<BranchEntry> branch_distribution(const MeasuredStepResult& step, std::int64_t t) {
  if (t < 0 || t > kMaxEnumeratedSteps) throw std::invalid_argument("branch enumeration is limited to 0 <= t <= 30");
  std::vector<BranchEntry> out;
  out.reserve(static_cast<std::size_t>(t) + 1);
  for (std::int64_t n = 0; n <= t; ++n) {
    const double p = binomial(t, n) * std::pow(step.p_r, static_cast<double>(n)) *
                     std::pow(step.p_l, static_cast<double>(t - n));
    out.push_back({n, p, static_cast<double>(n) * step.l1 + static_cast<double>(t - n) * step.l2});
  }
  return out;
}

std::vector<PacketBranch> evolve_measured_branch_distribution(const Packet& packet, double a_r, double a_l,
                                                              double theta, double l, std::int64_t t,
                                                              const SpectralGrid& spectral) {
  return evolve_measured_branch_distribution(to_spectral(packet, spectral), a_r, a_l, theta, l, t);
}

std::vector<PacketBranch> evolve_measured_branch_distribution(const SpectralPacket& src, double a_r, double a_l,
                                                              double theta, double l, std::int64_t t) {
  if (t < 0 || t > kMaxEnumeratedSteps) throw std::invalid_argument("branch enumeration is limited to 0 <= t <= 30");
  std::vector<PacketBranch> out;
  for (std::int64_t n = 0; n <= t; ++n) {
    PacketBranch b;
    b.n = n;
    b.multiplicity = binomial(t, n);
    b.history_field = measured_history_field(src, a_r, a_l, theta, l, t, n);
    b.probability = b.multiplicity * norm_squared(src.grid, b.history_field);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<ProfileRow> amplitude_profile(const WavePacketState& state) {
  std::vector<ProfileRow> rows(state.grid.n_points);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double ar = std::abs(state.field_r[i]);
    const double al = std::abs(state.field_l[i]);
    rows[i] = {state.grid.x(i), ar, al, ar * ar + al * al};
  }
  return rows;
}

double peak_position(const WavePacketState& state) {
  const auto rows = amplitude_profile(state);
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].density > rows[best].density) best = i;
  if (best == 0 || best + 1 == rows.size()) return rows[best].x;
  const double y0 = rows[best - 1].density;
  const double y1 = rows[best].density;
  const double y2 = rows[best + 1].density;
  const double curvature = y0 - 2.0 * y1 + y2;
  if (curvature == 0.0) return rows[best].x;
  return rows[best].x + 0.5 * state.grid.dx() * (y0 - y2) / curvature;
}

std::vector<double> local_maxima(const WavePacketState& state, double rel) {
  const auto rows = amplitude_profile(state);
  double top = 0.0;
  for (const auto& r : rows) top = std::max(top, r.density);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double d = rows[i].density;
    if (d > rows[i - 1].density && d >= rows[i + 1].density && d > rel * top) out.push_back(rows[i].x);
  }
  return out;
}

}  // namespace qwalk

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwalk/kernels.hpp"
#include "qwalk/plane_wave.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

/// Raised when a grid cannot represent a packet to the required tolerance.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform sampling of [x_min, x_max] with both endpoints included.
struct SpatialGrid {
  double x_min = -8.0;
  double x_max = 8.0;
  std::size_t n_points = 4096;

  /// Throws std::invalid_argument unless x_min < x_max and n_points >= 2.
  static SpatialGrid make(double x_min, double x_max, std::size_t n_points);

  double dx() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
  /// Trapezoidal quadrature weight of sample i.
  double weight(std::size_t i) const { return (i == 0 || i + 1 == n_points) ? 0.5 * dx() : dx(); }
  kernels::UniformAxis axis() const { return {x_min, dx(), n_points}; }
};

/// Uniform wavenumber nodes with trapezoidal weights.
struct SpectralGrid {
  double k_min = -16.0;
  double k_max = 16.0;
  std::size_t n_modes = 4096;

  static SpectralGrid make(double k_min, double k_max, std::size_t n_modes);
  static SpectralGrid symmetric(double k_max, std::size_t n_modes) { return make(-k_max, k_max, n_modes); }

  double dk() const { return (k_max - k_min) / static_cast<double>(n_modes - 1); }
  double k(std::size_t i) const { return k_min + dk() * static_cast<double>(i); }
  double weight(std::size_t i) const { return (i == 0 || i + 1 == n_modes) ? 0.5 * dk() : dk(); }
  kernels::UniformAxis axis() const { return {k_min, dk(), n_modes}; }
};

enum class Backend { Serial, Parallel };

/// Scalar spatial profile f(x) sampled on a grid.
struct Packet {
  SpatialGrid grid;
  std::vector<Complex> samples;
};

/// Spectral weights f~(k) with f(x) = integral f~(k) e^{ikx} dk.
struct Spectrum {
  SpectralGrid grid;
  std::vector<Complex> weights;
};

/// Coin-resolved field on a spatial grid.
struct WavePacketState {
  SpatialGrid grid;
  std::vector<Complex> field_r;
  std::vector<Complex> field_l;

  double norm_squared() const;
};

/// exp(-(x-center)^2 / (2 width^2)) / (pi width^2)^{1/4}: unit L2 norm.
Packet gaussian_packet(const SpatialGrid& grid, double width = 1.0, double center = 0.0);

/// Linear interpolation of (x, f) samples onto `grid`; zero outside the sampled range.
/// `x` must be strictly increasing.
Packet resample_packet(const SpatialGrid& grid, std::span<const double> x, std::span<const Complex> f);

/// Trapezoidal integral of |f|^2.
double norm_squared(const SpatialGrid& grid, std::span<const Complex> f);

/// Throws GridError if either end sample exceeds rel * max|f|.
void validate_boundary_decay(std::span<const Complex> f, double rel = 1e-8, const char* what = "packet");

/// f~(k) = (1/2pi) sum_j w_j f(x_j) e^{-ik x_j}. Refuses packets that do not decay at the grid ends.
Spectrum forward_transform(const Packet& packet, const SpectralGrid& spectral, Backend backend = Backend::Parallel);

/// f(x) = sum_k w_k f~(k) e^{ikx}.
Packet inverse_transform(const Spectrum& spectrum, const SpatialGrid& grid, Backend backend = Backend::Parallel);

/// 2pi * sum_k w_k |f~(k)|^2 divided by the spatial norm (Parseval). Close to 1 when the
/// spectral window holds the whole packet.
double spectral_capture(const Spectrum& spectrum, double spatial_norm);

/// Initial condition in spectral form, to be synthesized on `grid`.
struct SpectralPacket {
  SpatialGrid grid;
  Spectrum spectrum;
};

/// forward_transform plus the capture check. Weights below 1e-14 of the largest are transform
/// round-off and are zeroed so post-selected histories do not amplify them.
SpectralPacket to_spectral(const Packet& packet, const SpectralGrid& spectral);

/// Exact spectrum of gaussian_packet(grid, width, center), free of transform round-off.
/// Throws GridError if either grid cuts the packet above 1e-8 of its peak.
SpectralPacket gaussian_spectral_packet(const SpatialGrid& grid, const SpectralGrid& spectral = {}, double width = 1.0,
                                        double center = 0.0);

/// Coherent evolution of (coin.r |R> + coin.l |L>) (x) f(x) for t steps of R(theta) S.
/// Real coin amplitudes use the closed form per node; complex ones the matrix-power route.
WavePacketState evolve_unmeasured(const Packet& packet, CoinPair coin, double theta, double l, std::int64_t t,
                                  const SpectralGrid& spectral = {});
WavePacketState evolve_unmeasured(const SpectralPacket& src, CoinPair coin, double theta, double l, std::int64_t t);

struct MeasuredPacket {
  /// Unit-norm |L> field; field_r is zero.
  WavePacketState state;
  /// log of the branch norm before renormalization (probability of the all-left record).
  double log_branch_norm = 0.0;
  /// C = exp(-log_branch_norm / 2).
  double normalization = 1.0;
};

/// The history in which every per-step coin measurement returns |L>, renormalized.
/// Per-node weights are accumulated in log space so long runs do not underflow.
MeasuredPacket evolve_measured_all_left(const Packet& packet, double a_r, double a_l, double theta, double l,
                                        std::int64_t t, const SpectralGrid& spectral = {});
MeasuredPacket evolve_measured_all_left(const SpectralPacket& src, double a_r, double a_l, double theta, double l,
                                        std::int64_t t);

/// Unnormalized field of one measurement history with n_right R outcomes out of t.
std::vector<Complex> measured_history_field(const Packet& packet, double a_r, double a_l, double theta, double l,
                                            std::int64_t t, std::int64_t n_right, const SpectralGrid& spectral = {});
std::vector<Complex> measured_history_field(const SpectralPacket& src, double a_r, double a_l, double theta, double l,
                                            std::int64_t t, std::int64_t n_right);

inline constexpr std::int64_t kMaxEnumeratedSteps = 30;

struct BranchEntry {
  std::int64_t n = 0;  // number of R outcomes
  double probability = 0.0;
  double displacement = 0.0;  // n l1 + (t - n) l2
};

/// Binomial branch table of a single mode. Throws std::invalid_argument for t > 30.
std::vector<BranchEntry> branch_distribution(const MeasuredStepResult& step, std::int64_t t);

struct PacketBranch {
  std::int64_t n = 0;
  double multiplicity = 0.0;  // C(t, n) histories share this field
  double probability = 0.0;   // multiplicity * ||history field||^2
  std::vector<Complex> history_field;
};

/// Packet-level version: one entry per n with the shared history field. Throws for t > 30.
std::vector<PacketBranch> evolve_measured_branch_distribution(const Packet& packet, double a_r, double a_l,
                                                              double theta, double l, std::int64_t t,
                                                              const SpectralGrid& spectral = {});
std::vector<PacketBranch> evolve_measured_branch_distribution(const SpectralPacket& src, double a_r, double a_l,
                                                              double theta, double l, std::int64_t t);

struct ProfileRow {
  double x = 0.0;
  double abs_r = 0.0;
  double abs_l = 0.0;
  double density = 0.0;
};

std::vector<ProfileRow> amplitude_profile(const WavePacketState& state);

/// Location of the density maximum, refined by a parabola through the top three samples.
double peak_position(const WavePacketState& state);

/// Positions of interior local maxima of the density above rel * global maximum.
std::vector<double> local_maxima(const WavePacketState& state, double rel);

}  // namespace qwalk

#include <doctest.h>

#include "qwalk/wave_packet.hpp"
#include "support.hpp"

using namespace qwalk;
using qwalk::test::kPi;

namespace {

const double kTheta = -std::atan(0.9);
const double kStep = 0.01;
const double kCoin = 1.0 / std::sqrt(2.0);

// Wide enough on the left for the all-left history to travel ~0.19 per step.
SpatialGrid fig3_grid() { return SpatialGrid::make(-20.0, 10.0, 3072); }

Packet unnormalized_gaussian(const SpatialGrid& grid) {
  Packet p{grid, std::vector<Complex>(grid.n_points)};
  for (std::size_t i = 0; i < grid.n_points; ++i) p.samples[i] = std::exp(-0.5 * grid.x(i) * grid.x(i));
  return p;
}

}  // namespace

TEST_CASE("grids validate their parameters") {
  CHECK_THROWS_AS(SpatialGrid::make(1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(SpatialGrid::make(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(SpectralGrid::make(2.0, -2.0, 10), std::invalid_argument);
  const auto g = SpatialGrid::make(-1.0, 1.0, 5);
  CHECK(g.dx() == 0.5);
  CHECK(g.x(4) == 1.0);
  CHECK(g.weight(0) == 0.25);
  CHECK(g.weight(2) == 0.5);
}

TEST_CASE("forward_transform of the normalized Gaussian") {
  const SpatialGrid grid;
  const SpectralGrid spectral;
  const Spectrum s = forward_transform(gaussian_packet(grid), spectral);
  // (1/2pi) integral pi^{-1/4} e^{-x^2/2} e^{-ikx} dx = pi^{-1/4} e^{-k^2/2} / sqrt(2pi)
  const double scale = std::pow(kPi, -0.25) / std::sqrt(2.0 * kPi);
  double worst = 0.0;
  for (std::size_t i = 0; i < spectral.n_modes; ++i) {
    const double k = spectral.k(i);
    if (std::abs(k) > 6.0) continue;
    worst = std::max(worst, std::abs(s.weights[i] - scale * std::exp(-0.5 * k * k)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("forward_transform of exp(-x^2/2) is exp(-k^2/2)/sqrt(2pi)") {
  const SpatialGrid grid;
  const SpectralGrid spectral;
  const Spectrum s = forward_transform(unnormalized_gaussian(grid), spectral);
  double worst = 0.0;
  for (std::size_t i = 0; i < spectral.n_modes; ++i) {
    const double k = spectral.k(i);
    if (std::abs(k) > 6.0) continue;
    worst = std::max(worst, std::abs(s.weights[i] - std::exp(-0.5 * k * k) / std::sqrt(2.0 * kPi)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("round trip and shift theorem") {
  const SpatialGrid grid;
  const SpectralGrid spectral;
  const Packet f = gaussian_packet(grid, 0.8, 0.5);
  const Spectrum s = forward_transform(f, spectral);
  const Packet back = inverse_transform(s, grid);
  CHECK(test::max_abs_diff(back.samples, f.samples) < 1e-8);

  const double x0 = 1.25;
  const Spectrum base = forward_transform(gaussian_packet(grid, 0.8, 0.0), spectral);
  const Spectrum moved = forward_transform(gaussian_packet(grid, 0.8, x0), spectral);
  double worst = 0.0;
  for (std::size_t i = 0; i < spectral.n_modes; ++i)
    worst = std::max(worst, std::abs(moved.weights[i] - base.weights[i] * std::exp(Complex(0, -spectral.k(i) * x0))));
  CHECK(worst < 1e-10);
}

TEST_CASE("inverse_transform basics") {
  const SpatialGrid grid = SpatialGrid::make(-3.0, 3.0, 301);
  const SpectralGrid spectral = SpectralGrid::symmetric(4.0, 81);
  SUBCASE("single node") {
    Spectrum s{spectral, std::vector<Complex>(spectral.n_modes)};
    const std::size_t node = 50;
    s.weights[node] = Complex(0.3, -0.2);
    const Packet p = inverse_transform(s, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.n_points; ++j) {
      const Complex want = spectral.weight(node) * s.weights[node] * std::exp(Complex(0, spectral.k(node) * grid.x(j)));
      worst = std::max(worst, std::abs(p.samples[j] - want));
    }
    CHECK(worst < 1e-15);
  }
  SUBCASE("zero weights") {
    const Packet p = inverse_transform(Spectrum{spectral, std::vector<Complex>(spectral.n_modes)}, grid);
    CHECK(test::max_abs(p.samples) == 0.0);
  }
  SUBCASE("Gaussian spectral weights synthesize exp(-x^2/2)") {
    const SpectralGrid wide;
    Spectrum s{wide, std::vector<Complex>(wide.n_modes)};
    for (std::size_t i = 0; i < wide.n_modes; ++i) s.weights[i] = std::exp(-0.5 * wide.k(i) * wide.k(i)) / std::sqrt(2.0 * kPi);
    const Packet p = inverse_transform(s, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.n_points; ++j) worst = std::max(worst, std::abs(p.samples[j] - std::exp(-0.5 * grid.x(j) * grid.x(j))));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("serial and parallel transforms agree") {
  const SpatialGrid grid = SpatialGrid::make(-8.0, 8.0, 1024);
  const SpectralGrid spectral = SpectralGrid::symmetric(10.0, 777);
  const Packet f = gaussian_packet(grid, 1.1, -0.4);
  const Spectrum a = forward_transform(f, spectral, Backend::Serial);
  const Spectrum b = forward_transform(f, spectral, Backend::Parallel);
  CHECK(test::max_abs_diff(a.weights, b.weights) < 1e-13);
  CHECK(test::max_abs_diff(inverse_transform(a, grid, Backend::Serial).samples, inverse_transform(a, grid, Backend::Parallel).samples) < 1e-12);
}

TEST_CASE("analytic Gaussian spectrum matches the transformed one") {
  const SpatialGrid grid;
  const SpectralGrid spectral;
  const SpectralPacket exact = gaussian_spectral_packet(grid, spectral, 0.8, 0.5);
  const Spectrum numeric = forward_transform(gaussian_packet(grid, 0.8, 0.5), spectral);
  CHECK(test::max_abs_diff(exact.spectrum.weights, numeric.weights) < 1e-14);
  CHECK_THROWS_AS(gaussian_spectral_packet(SpatialGrid::make(-2, 2, 100)), GridError);
  CHECK_THROWS_AS(gaussian_spectral_packet(grid, SpectralGrid::symmetric(3.0, 100)), GridError);
}

TEST_CASE("sampled packets refuse long post-selected histories that amplify round-off") {
  // The transformed spectrum carries noise near 1e-17 that 35 all-left steps lift above the boundary check.
  CHECK_THROWS_AS(evolve_measured_all_left(gaussian_packet(fig3_grid()), kCoin, kCoin, kTheta, kStep, 35), GridError);
}

TEST_CASE("grid validation refuses packets that do not decay") {
  const SpatialGrid narrow = SpatialGrid::make(-2.0, 2.0, 200);
  CHECK_THROWS_AS(forward_transform(gaussian_packet(narrow), SpectralGrid{}), GridError);
  CHECK_THROWS_AS(evolve_unmeasured(gaussian_packet(narrow), {kCoin, kCoin}, kTheta, kStep, 1), GridError);
  // Spectral window too small to hold the packet.
  CHECK_THROWS_AS(evolve_unmeasured(gaussian_packet(SpatialGrid{}, 0.1), {kCoin, kCoin}, kTheta, kStep, 1), GridError);
}

TEST_CASE("resample_packet interpolates linearly and zero-fills outside") {
  const SpatialGrid grid = SpatialGrid::make(-2.0, 2.0, 9);
  const std::vector<double> xs{-1.0, 0.0, 1.0};
  const std::vector<Complex> fs{Complex(1.0, 0.0), Complex(3.0, 2.0), Complex(1.0, 0.0)};
  const Packet p = resample_packet(grid, xs, fs);
  CHECK(p.samples[0] == Complex{});
  CHECK(p.samples[2] == Complex(1.0, 0.0));
  CHECK(std::abs(p.samples[3] - Complex(2.0, 1.0)) < 1e-15);
  CHECK(p.samples[4] == Complex(3.0, 2.0));
  CHECK(p.samples[6] == Complex(1.0, 0.0));
  CHECK(p.samples[8] == Complex{});
  const std::vector<double> bad{0.0, 0.0};
  CHECK_THROWS_AS(resample_packet(grid, bad, std::vector<Complex>(2)), std::invalid_argument);
}

TEST_CASE("evolve_measured_all_left: t = 0 echoes the input") {
  const SpatialGrid grid;
  const Packet f = gaussian_packet(grid);
  const MeasuredPacket m = evolve_measured_all_left(f, kCoin, kCoin, kTheta, kStep, 0);
  CHECK(m.normalization == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(test::max_abs_diff(m.state.field_l, f.samples) < 1e-8);
  CHECK(test::max_abs(m.state.field_r) == 0.0);
}

TEST_CASE("evolve_measured_all_left: one step moves the peak far more than l") {
  const MeasuredPacket m = evolve_measured_all_left(gaussian_spectral_packet(fig3_grid()), kCoin, kCoin, kTheta, kStep, 1);
  CHECK(m.state.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
  const double peak = peak_position(m.state);
  // Small-k slope of the L offset is 19 l; the finite spectral width of the packet lowers it a little.
  CHECK(peak < -10.0 * kStep);
  CHECK(peak == doctest::Approx(-0.19).epsilon(0.05));
}

TEST_CASE("evolve_measured_all_left: the packet splits after 35 steps") {
  const MeasuredPacket m = evolve_measured_all_left(gaussian_spectral_packet(fig3_grid()), kCoin, kCoin, kTheta, kStep, 35);
  CHECK(local_maxima(m.state, 0.1).size() >= 2);
  CHECK(m.state.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("evolve_measured_all_left survives underflowing branch weights") {
  // p_L^(t/2) is far below the smallest double here.
  const MeasuredPacket m = evolve_measured_all_left(gaussian_packet(SpatialGrid::make(-10, 10, 640), 1.0, 0.0), kCoin,
                                                    kCoin, 0.3, 0.01, 400, SpectralGrid::symmetric(16, 512));
  CHECK(m.state.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::isfinite(m.log_branch_norm));
}

TEST_CASE("branch_distribution of a single mode") {
  const auto step = measured_step(0.6, 0.8, 0.4, 1.5, 0.2);
  const auto one = branch_distribution(step, 1);
  REQUIRE(one.size() == 2);
  CHECK(one[0].probability == doctest::Approx(step.p_l));
  CHECK(one[1].probability == doctest::Approx(step.p_r));
  CHECK(one[1].displacement == doctest::Approx(step.l1));
  for (std::int64_t t : {0, 3, 17, 30}) {
    double sum = 0.0;
    for (const auto& e : branch_distribution(step, t)) sum += e.probability;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(branch_distribution(step, 31), std::invalid_argument);
}

TEST_CASE("packet branches: n = 0 is the unnormalized all-left history and probabilities sum to one") {
  const SpatialGrid grid = SpatialGrid::make(-12.0, 8.0, 1024);
  const SpectralGrid spectral = SpectralGrid::symmetric(16.0, 1024);
  const Packet f = gaussian_packet(grid);
  const auto branches = evolve_measured_branch_distribution(f, kCoin, kCoin, kTheta, kStep, 5, spectral);
  REQUIRE(branches.size() == 6);
  double total = 0.0;
  for (const auto& b : branches) total += b.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  const MeasuredPacket all_left = evolve_measured_all_left(f, kCoin, kCoin, kTheta, kStep, 5, spectral);
  std::vector<Complex> rescaled = all_left.state.field_l;
  const double scale = std::exp(0.5 * all_left.log_branch_norm);
  for (auto& v : rescaled) v *= scale;
  CHECK(test::max_abs_diff(rescaled, branches[0].history_field) < 1e-10 * test::max_abs(branches[0].history_field));
}

TEST_CASE("evolve_unmeasured: one coherent step equals the pre-measurement branches") {
  const SpatialGrid grid;
  const Packet f = gaussian_packet(grid);
  const WavePacketState s = evolve_unmeasured(f, {kCoin, kCoin}, kTheta, kStep, 1);
  const auto right = measured_history_field(f, kCoin, kCoin, kTheta, kStep, 1, 1);
  const auto left = measured_history_field(f, kCoin, kCoin, kTheta, kStep, 1, 0);
  CHECK(test::max_abs_diff(s.field_r, right) < 1e-8);
  CHECK(test::max_abs_diff(s.field_l, left) < 1e-8);
}

TEST_CASE("evolve_unmeasured: small t barely changes the packet and conserves the norm") {
  const SpatialGrid grid;
  const Packet f = gaussian_packet(grid);
  double peak0 = 0.0;
  for (const auto& v : f.samples) peak0 = std::max(peak0, std::norm(v));
  for (std::int64_t t : {1, 2, 5, 10}) {
    const WavePacketState s = evolve_unmeasured(f, {kCoin, kCoin}, kTheta, kStep, t);
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-8);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i)
      worst = std::max(worst, std::abs(std::norm(s.field_r[i]) + std::norm(s.field_l[i]) - std::norm(f.samples[i])));
    CHECK(worst < 0.05 * peak0);
  }
}

TEST_CASE("evolve_unmeasured is linear") {
  const SpatialGrid grid = SpatialGrid::make(-10, 10, 1024);
  const SpectralGrid spectral = SpectralGrid::symmetric(16.0, 1024);
  const Packet f = gaussian_packet(grid, 1.0, -1.0);
  const Packet g = gaussian_packet(grid, 0.7, 2.0);
  const Complex alpha(0.3, 0.4), beta(-0.5, 0.1);
  Packet mix{grid, std::vector<Complex>(grid.n_points)};
  for (std::size_t i = 0; i < grid.n_points; ++i) mix.samples[i] = alpha * f.samples[i] + beta * g.samples[i];
  const CoinPair coin{0.6, 0.8};
  const auto ef = evolve_unmeasured(f, coin, 0.5, 0.05, 13, spectral);
  const auto eg = evolve_unmeasured(g, coin, 0.5, 0.05, 13, spectral);
  const auto em = evolve_unmeasured(mix, coin, 0.5, 0.05, 13, spectral);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    worst = std::max(worst, std::abs(em.field_r[i] - (alpha * ef.field_r[i] + beta * eg.field_r[i])));
    worst = std::max(worst, std::abs(em.field_l[i] - (alpha * ef.field_l[i] + beta * eg.field_l[i])));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("evolve_unmeasured accepts complex coin states") {
  const SpatialGrid grid = SpatialGrid::make(-10, 10, 512);
  const SpectralGrid spectral = SpectralGrid::symmetric(16.0, 512);
  const Packet f = gaussian_packet(grid);
  const double r = 1.0 / std::sqrt(2.0);
  const auto s = evolve_unmeasured(f, {Complex(r, 0.0), Complex(0.0, r)}, 0.9, 0.1, 25, spectral);
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-8);
}

TEST_CASE("default resolution is converged at t = 20") {
  const SpatialGrid grid;
  const SpectralGrid spectral;
  const SpatialGrid fine = SpatialGrid::make(grid.x_min, grid.x_max, 2 * grid.n_points - 1);
  const SpectralGrid finer = SpectralGrid::make(spectral.k_min, spectral.k_max, 2 * spectral.n_modes);
  const auto coarse_run = evolve_unmeasured(gaussian_packet(grid), {kCoin, kCoin}, kTheta, kStep, 20, spectral);
  const auto fine_run = evolve_unmeasured(gaussian_packet(fine), {kCoin, kCoin}, kTheta, kStep, 20, finer);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    worst = std::max(worst, std::abs(coarse_run.field_r[i] - fine_run.field_r[2 * i]));
    worst = std::max(worst, std::abs(coarse_run.field_l[i] - fine_run.field_l[2 * i]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("amplitude_profile") {
  const SpatialGrid grid;
  SUBCASE("zero field") {
    const WavePacketState z{grid, std::vector<Complex>(grid.n_points), std::vector<Complex>(grid.n_points)};
    for (const auto& row : amplitude_profile(z)) {
      CHECK(row.abs_r == 0.0);
      CHECK(row.abs_l == 0.0);
      CHECK(row.density == 0.0);
    }
  }
  SUBCASE("normalized R-only Gaussian") {
    const WavePacketState s{grid, gaussian_packet(grid).samples, std::vector<Complex>(grid.n_points)};
    double sum = 0.0;
    for (const auto& row : amplitude_profile(s)) sum += row.abs_r * row.abs_r * grid.dx();
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("measured checkpoints move steadily left") {
    const SpectralPacket f = gaussian_spectral_packet(fig3_grid());
    double previous = 0.0;
    for (std::int64_t t : {1, 3, 5, 10, 20, 35}) {
      const double peak = peak_position(evolve_measured_all_left(f, kCoin, kCoin, kTheta, kStep, t).state);
      CHECK(peak < previous);
      previous = peak;
    }
  }
}

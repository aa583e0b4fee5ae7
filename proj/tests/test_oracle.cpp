#include <doctest.h>

#include "qwalk/coin_walk.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/plane_wave.hpp"
#include "qwalk/unmeasured_evolution.hpp"
#include "qwalk/wave_packet.hpp"
#include "support.hpp"

using namespace qwalk;
using qwalk::test::kPi;

namespace {

oracle::LatticeField sample_field(const SpatialGrid& grid, const Packet& f, CoinPair coin) {
  oracle::LatticeField field{grid.dx(), grid.x_min, std::vector<CoinPair>(grid.n_points)};
  for (std::size_t i = 0; i < grid.n_points; ++i) field.sites[i] = CoinPair{coin.r * f.samples[i], coin.l * f.samples[i]};
  return field;
}

}  // namespace

TEST_CASE("lattice_evolve: theta = 0 is a pure translation of each component") {
  const SpatialGrid grid = SpatialGrid::make(-4.0, 4.0, 801);
  const Packet f = gaussian_packet(grid, 0.5);
  const auto field = sample_field(grid, f, {0.6, 0.8});
  const auto run = oracle::lattice_evolve(field, {0.6, 0.8}, 0.0, 0.05, 3, oracle::MeasureMode::Coherent);
  // R moves by +l per step, L by -l, on a 0.01 grid: 15 sites total.
  for (std::size_t i = 20; i + 20 < grid.n_points; ++i) {
    CHECK(std::abs(run.field.sites[i].r - 0.6 * f.samples[i - 15]) < 1e-15);
    CHECK(std::abs(run.field.sites[i].l - 0.8 * f.samples[i + 15]) < 1e-15);
  }
  CHECK(run.record.empty());
  CHECK_THROWS_AS(oracle::lattice_evolve(field, {0.6, 0.8}, 0.0, 0.013, 1, oracle::MeasureMode::Coherent),
                  std::invalid_argument);
}

TEST_CASE("coherent lattice evolution matches the spectral closed form at t = 100") {
  const SpatialGrid grid = SpatialGrid::make(-8.0, 8.0, 3201);
  const Packet f = gaussian_packet(grid);
  const double c = 1.0 / std::sqrt(2.0);
  const double theta = -std::atan(0.9);
  const auto run = oracle::lattice_evolve(sample_field(grid, f, {c, c}), {c, c}, theta, 0.01, 100,
                                          oracle::MeasureMode::Coherent);
  const auto s = evolve_unmeasured(f, {c, c}, theta, 0.01, 100);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    worst = std::max(worst, std::abs(run.field.sites[i].r - s.field_r[i]));
    worst = std::max(worst, std::abs(run.field.sites[i].l - s.field_l[i]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("post-selected lattice run matches the spectral all-left history") {
  const SpatialGrid grid = SpatialGrid::make(-12.0, 12.0, 2401);
  const Packet f = gaussian_packet(grid);
  const double c = 1.0 / std::sqrt(2.0);
  const double theta = -std::atan(0.9);
  // Each lattice projection is a near-cancellation, so its round-off grows ~1/sqrt(p_L) per step;
  // five steps keep the oracle itself well inside the tolerance.
  const auto run = oracle::lattice_evolve(sample_field(grid, f, {c, c}), {c, c}, theta, 0.01, 5,
                                          oracle::MeasureMode::ForceLeft);
  const auto m = evolve_measured_all_left(f, c, c, theta, 0.01, 5);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    worst = std::max(worst, std::abs(run.field.sites[i].l - m.state.field_l[i]));
    CHECK(run.field.sites[i].r == Complex{});
  }
  CHECK(worst < 1e-8);
  CHECK(run.record == std::vector<char>(5, 'L'));
}

TEST_CASE("mode_matrix_power basics") {
  const CoinPair v{Complex(0.6, 0.1), Complex(0.2, -0.77)};
  const CoinPair same = oracle::mode_matrix_power(v, 1.3, 0.4, 0.7, 0);
  CHECK(same.r == v.r);
  CHECK(same.l == v.l);
  CHECK_THROWS_AS(oracle::mode_matrix_power(v, 1.3, 0.4, 0.7, -1), std::invalid_argument);

  // theta = pi/2 swaps the components with a sign: two steps negate the state.
  const CoinPair twice = oracle::mode_matrix_power(v, 0.9, 0.3, kPi / 2, 2);
  CHECK(std::abs(twice.r + v.r) < 1e-14);
  CHECK(std::abs(twice.l + v.l) < 1e-14);

  const CoinPair far = oracle::mode_matrix_power(CoinPair{1.0, 0.0}, 2.1, 0.01, -0.4, 10000);
  CHECK(far.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mode_matrix_power: eigen route agrees with repeated squaring") {
  test::Gen gen(31);
  for (int n = 0; n < 200; ++n) {
    const double k = gen.wavenumber(), l = gen.uniform(0.01, 1.0), theta = gen.uniform(-kPi, kPi);
    const auto [ar, al] = gen.real_coin();
    const std::int64_t t = 1001 + static_cast<std::int64_t>(gen.uniform(0, 4000));
    const CoinPair a = oracle::mode_matrix_power(CoinPair{ar, al}, k, l, theta, t);
    // Binary powering of the literal step matrix.
    Mat2 base = step_operator(k, l, theta), acc = Mat2::identity();
    for (std::int64_t e = t; e > 0; e >>= 1) {
      if (e & 1) acc = acc * base;
      base = base * base;
    }
    const CoinPair b = acc * CoinPair{ar, al};
    CHECK(std::abs(a.r - b.r) < 1e-8);
    CHECK(std::abs(a.l - b.l) < 1e-8);
  }
}

TEST_CASE("measured_branches_direct agrees with the closed-form measured step") {
  test::Gen gen(5);
  for (int n = 0; n < 500; ++n) {
    const double k = gen.wavenumber(), l = gen.uniform(0.01, 1.0), theta = gen.uniform(-kPi, kPi);
    const auto [ar, al] = gen.real_coin();
    const CoinPair direct = oracle::measured_branches_direct({ar, al}, k, l, theta);
    const CoinPair closed = measured_step(ar, al, theta, k, l).branch_amplitudes();
    CHECK(std::abs(direct.r - closed.r) < 1e-12);
    CHECK(std::abs(direct.l - closed.l) < 1e-12);
  }
}

TEST_CASE("statistics_from_histogram") {
  const std::vector<std::uint64_t> hist{1, 2, 1};
  const auto s = oracle::statistics_from_histogram(hist, -1.0, 2.0);
  CHECK(s.samples == 4);
  CHECK(s.mean == doctest::Approx(1.0));
  // values -1, 1, 1, 3; unbiased estimator
  CHECK(s.variance == doctest::Approx(8.0 / 3.0));
  CHECK(s.mean_stderr > 0.0);
}

TEST_CASE("monte_carlo_measured_mode is deterministic and matches the binomial moments") {
  const auto step = measured_step(0.6, 0.8, 0.5, 1.7, 0.1);
  const std::int64_t t = 40;
  const auto a = oracle::monte_carlo_measured_mode(step.p_r, step.l1, step.l2, t, 100000, 99);
  const auto b = oracle::monte_carlo_measured_mode(step.p_r, step.l1, step.l2, t, 100000, 99);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.seed == 99);
  const Moments m = measured_moments(step, t);
  CHECK(std::abs(a.mean - m.mean) < 4.0 * a.mean_stderr);
  CHECK(std::abs(a.variance - m.variance) < 4.0 * a.variance_stderr);
  CHECK_THROWS_AS(oracle::monte_carlo_measured_mode(step.p_r, step.l1, step.l2, t, 9999, 1), std::invalid_argument);
}

TEST_CASE("monte_carlo_particle_walk with a measured Hadamard coin is a classical walk") {
  const double c = 1.0 / std::sqrt(2.0);
  const auto s = oracle::monte_carlo_particle_walk(coin_matrix(CoinSpec::hadamard()), {c, Complex(0, c)}, 100,
                                                   100000, 7);
  CHECK(std::abs(s.mean) < 4.0 * s.mean_stderr);
  CHECK(std::abs(s.variance - 100.0) < 4.0 * s.variance_stderr);
}

TEST_CASE("binomial_branch_check agrees with step-by-step composition") {
  test::Gen gen(77);
  for (int n = 0; n < 50; ++n) {
    const auto [ar, al] = gen.real_coin();
    const auto c = oracle::binomial_branch_check(ar, al, gen.uniform(-kPi, kPi), gen.wavenumber(),
                                                 gen.uniform(0.01, 1.0), 1 + n % 30);
    CHECK(c.max_probability_deviation < 1e-12);
    CHECK(c.max_amplitude_deviation < 1e-12);
    CHECK(c.probability_sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

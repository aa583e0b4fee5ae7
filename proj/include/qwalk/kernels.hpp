#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference and an
// OpenMP version; tests hold the two together and bench/ times them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk::kernels {

struct UniformAxis {
  double start = 0.0;
  double step = 0.0;
  std::size_t size = 0;

  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
};

/// out[j] = sum_i coeff[i] * exp(i * sign * s_i * t_j), s_i on `source`, t_j on `target`.
/// Summation runs over i in ascending order for every j.
void exp_sum_serial(const UniformAxis& source, std::span<const Complex> coeff, const UniformAxis& target, int sign,
                    std::span<Complex> out);

/// Same sum; parallel over targets, phasors advanced by recurrence and re-seeded
/// exactly every kReseed terms. Agrees with the serial kernel to ~1e-14 relative.
void exp_sum_parallel(const UniformAxis& source, std::span<const Complex> coeff, const UniformAxis& target, int sign,
                      std::span<Complex> out);

inline constexpr std::size_t kReseed = 32;

/// Histogram (size steps+1) of success counts over `trajectories` runs of `steps`
/// Bernoulli(p) trials. Stream b of `seed` drives block b of rng::kBlockSize runs,
/// so the serial and parallel versions return identical histograms.
std::vector<std::uint64_t> bernoulli_histogram_serial(double p, std::int64_t steps, std::uint64_t trajectories,
                                                      std::uint64_t seed);
std::vector<std::uint64_t> bernoulli_histogram_parallel(double p, std::int64_t steps, std::uint64_t trajectories,
                                                        std::uint64_t seed);

}  // namespace qwalk::kernels

#include "qwalk/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#include "qwalk/rng.hpp"

namespace qwalk::kernels {

namespace {

void check_sizes(const UniformAxis& source, std::span<const Complex> coeff, const UniformAxis& target,
                 std::span<Complex> out) {
  if (coeff.size() != source.size || out.size() != target.size)
    throw std::invalid_argument("exp_sum: span sizes do not match axes");
}

void block_counts(rng::BernoulliThreshold draw, std::int64_t steps, std::uint64_t count, std::uint64_t seed,
                  std::uint64_t block, std::vector<std::uint64_t>& hist) {
  rng::Engine engine = rng::make_stream(seed, block);
  for (std::uint64_t n = 0; n < count; ++n) {
    std::int64_t hits = 0;
    std::int64_t s = 0;
    // Two trials per 64-bit output: low half first, then high half.
    for (; s + 1 < steps; s += 2) {
      const std::uint64_t w = engine();
      hits += draw.hit(static_cast<std::uint32_t>(w)) ? 1 : 0;
      hits += draw.hit(static_cast<std::uint32_t>(w >> 32)) ? 1 : 0;
    }
    if (s < steps) hits += draw(engine) ? 1 : 0;
    ++hist[static_cast<std::size_t>(hits)];
  }
}

}  // namespace

void exp_sum_serial(const UniformAxis& source, std::span<const Complex> coeff, const UniformAxis& target, int sign,
                    std::span<Complex> out) {
  check_sizes(source, coeff, target, out);
  const double sg = sign >= 0 ? 1.0 : -1.0;
  for (std::size_t j = 0; j < target.size; ++j) {
    const double t = target.at(j);
    Complex acc{};
    for (std::size_t i = 0; i < source.size; ++i) acc += coeff[i] * std::polar(1.0, sg * source.at(i) * t);
    out[j] = acc;
  }
}

void exp_sum_parallel(const UniformAxis& source, std::span<const Complex> coeff, const UniformAxis& target, int sign,
                      std::span<Complex> out) {
  check_sizes(source, coeff, target, out);
  const double sg = sign >= 0 ? 1.0 : -1.0;
  const auto n_src = static_cast<std::ptrdiff_t>(source.size);
  const auto n_tgt = static_cast<std::ptrdiff_t>(target.size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n_tgt; ++j) {
    const double t = target.at(static_cast<std::size_t>(j));
    const double inc_re = std::cos(sg * source.step * t);
    const double inc_im = std::sin(sg * source.step * t);
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::ptrdiff_t base = 0; base < n_src; base += static_cast<std::ptrdiff_t>(kReseed)) {
      const double phase = sg * source.at(static_cast<std::size_t>(base)) * t;
      double ph_re = std::cos(phase);
      double ph_im = std::sin(phase);
      const std::ptrdiff_t end = std::min(n_src, base + static_cast<std::ptrdiff_t>(kReseed));
      for (std::ptrdiff_t i = base; i < end; ++i) {
        const double c_re = coeff[static_cast<std::size_t>(i)].real();
        const double c_im = coeff[static_cast<std::size_t>(i)].imag();
        acc_re += c_re * ph_re - c_im * ph_im;
        acc_im += c_re * ph_im + c_im * ph_re;
        const double next_re = ph_re * inc_re - ph_im * inc_im;
        ph_im = ph_re * inc_im + ph_im * inc_re;
        ph_re = next_re;
      }
    }
    out[static_cast<std::size_t>(j)] = {acc_re, acc_im};
  }
}

std::vector<std::uint64_t> bernoulli_histogram_serial(double p, std::int64_t steps, std::uint64_t trajectories,
                                                      std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  const rng::BernoulliThreshold draw(p);
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(steps) + 1, 0);
  const std::uint64_t blocks = (trajectories + rng::kBlockSize - 1) / rng::kBlockSize;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t first = b * rng::kBlockSize;
    block_counts(draw, steps, std::min(rng::kBlockSize, trajectories - first), seed, b, hist);
  }
  return hist;
}

std::vector<std::uint64_t> bernoulli_histogram_parallel(double p, std::int64_t steps, std::uint64_t trajectories,
                                                        std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  const rng::BernoulliThreshold draw(p);
  const auto bins = static_cast<std::size_t>(steps) + 1;
  std::vector<std::uint64_t> hist(bins, 0);
  const auto blocks = static_cast<std::ptrdiff_t>((trajectories + rng::kBlockSize - 1) / rng::kBlockSize);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(dynamic, 1) nowait
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const auto first = static_cast<std::uint64_t>(b) * rng::kBlockSize;
      block_counts(draw, steps, std::min(rng::kBlockSize, trajectories - first), seed, static_cast<std::uint64_t>(b),
                   local);
    }
    // Integer sums commute, so the merge order does not affect the result.
#pragma omp critical
    for (std::size_t i = 0; i < bins; ++i) hist[i] += local[i];
  }
  return hist;
}

}  // namespace qwalk::kernels

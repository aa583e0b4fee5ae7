#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qwalk/kernels.hpp"

namespace {

using qwalk::Complex;
using qwalk::kernels::UniformAxis;

struct ExpSumCase {
  UniformAxis source;
  UniformAxis target;
  std::vector<Complex> coeff;
  std::vector<Complex> out;

  explicit ExpSumCase(std::size_t n)
      : source{-16.0, 32.0 / static_cast<double>(n), n},
        target{-20.0, 30.0 / static_cast<double>(n - 1), n},
        coeff(n),
        out(n) {
    for (std::size_t i = 0; i < n; ++i) {
      const double k = source.at(i);
      coeff[i] = std::polar(std::exp(-0.5 * k * k), 0.3 * k);
    }
  }
};

template <auto Kernel>
void BM_ExpSum(benchmark::State& state) {
  ExpSumCase c(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Kernel(c.source, c.coeff, c.target, +1, c.out);
    benchmark::DoNotOptimize(c.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void BM_BernoulliHistogram(benchmark::State& state) {
  const auto trajectories = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto h = Kernel(0.3, 100, trajectories, 7);
    benchmark::DoNotOptimize(h.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}

}  // namespace

BENCHMARK(BM_ExpSum<qwalk::kernels::exp_sum_serial>)->Name("exp_sum/serial")->Arg(1024)->Arg(4096);
BENCHMARK(BM_ExpSum<qwalk::kernels::exp_sum_parallel>)->Name("exp_sum/parallel")->Arg(1024)->Arg(4096);
BENCHMARK(BM_BernoulliHistogram<qwalk::kernels::bernoulli_histogram_serial>)
    ->Name("bernoulli_histogram/serial")
    ->Arg(1 << 16)
    ->Arg(1 << 20);
BENCHMARK(BM_BernoulliHistogram<qwalk::kernels::bernoulli_histogram_parallel>)
    ->Name("bernoulli_histogram/parallel")
    ->Arg(1 << 16)
    ->Arg(1 << 20);

BENCHMARK_MAIN();

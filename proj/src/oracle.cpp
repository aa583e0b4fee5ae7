#include "qwalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwalk/kernels.hpp"
#include "qwalk/plane_wave.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/unmeasured_evolution.hpp"
#include "qwalk/wave_packet.hpp"

namespace qwalk::oracle {

namespace {

CoinPair binary_power(const Mat2& m, CoinPair v, std::int64_t t) {
  Mat2 base = m;
  Mat2 acc = Mat2::identity();
  while (t > 0) {
    if (t & 1) acc = acc * base;
    base = base * base;
    t >>= 1;
  }
  return acc * v;
}

CoinPair normalized(CoinPair v) {
  const double n = std::sqrt(v.norm_squared());
  return (1.0 / n) * v;
}

CoinPair eigvec(const Mat2& m, Complex lambda) {
  const CoinPair top{m(0, 1), lambda - m(0, 0)};
  const CoinPair bottom{lambda - m(1, 1), m(1, 0)};
  return normalized(top.norm_squared() >= bottom.norm_squared() ? top : bottom);
}

Complex eigen_power(Complex lambda, std::int64_t t) {
  const double td = static_cast<double>(t);
  return std::polar(std::pow(std::abs(lambda), td), td * std::arg(lambda));
}

std::int64_t sites_per_step(double spacing, double l) {
  if (!(spacing > 0.0) || !(l > 0.0)) throw std::invalid_argument("spacing and step length must be positive");
  const double ratio = l / spacing;
  const double m = std::round(ratio);
  if (m < 1.0 || std::abs(ratio - m) > 1e-9 * m)
    throw std::invalid_argument("step length is not an integer multiple of the lattice spacing");
  return static_cast<std::int64_t>(m);
}

}  // namespace

CoinPair mode_matrix_power(CoinPair start, double k, double l, double theta, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("step count must be non-negative");
  const Mat2 m = step_operator(k, l, theta);
  if (t <= kDirectPowerLimit) {
    CoinPair v = start;
    for (std::int64_t s = 0; s < t; ++s) v = m * v;
    return v;
  }
  // Generic 2x2 eigenproblem from trace and determinant.
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex disc = std::sqrt(0.25 * tr * tr - det);
  const Complex lam1 = 0.5 * tr + disc;
  const Complex lam2 = 0.5 * tr - disc;
  if (std::abs(lam1 - lam2) < 1e-6) return binary_power(m, start, t);
  const CoinPair v1 = eigvec(m, lam1);
  const CoinPair v2 = eigvec(m, lam2);
  // Solve start = c1 v1 + c2 v2.
  const Complex d = v1.r * v2.l - v2.r * v1.l;
  const Complex c1 = (start.r * v2.l - v2.r * start.l) / d;
  const Complex c2 = (v1.r * start.l - start.r * v1.l) / d;
  return (c1 * eigen_power(lam1, t)) * v1 + (c2 * eigen_power(lam2, t)) * v2;
}

CoinPair measured_branches_direct(CoinPair coin, double k, double l, double theta) {
  const Complex shifted_r = coin.r * std::exp(Complex(0.0, -k * l));
  const Complex shifted_l = coin.l * std::exp(Complex(0.0, k * l));
  return {std::cos(theta) * shifted_r - std::sin(theta) * shifted_l,
          std::sin(theta) * shifted_r + std::cos(theta) * shifted_l};
}

double LatticeField::norm_squared() const {
  double acc = 0.0;
  for (const auto& s : sites) acc += s.norm_squared();
  return acc * spacing;
}

LatticeRun lattice_evolve(const LatticeField& field, CoinPair reinit, double theta, double l, std::int64_t t,
                          MeasureMode mode, std::uint64_t seed) {
  if (t < 0) throw std::invalid_argument("step count must be non-negative");
  const std::vector<double> thetas(static_cast<std::size_t>(t), theta);
  return lattice_evolve(field, reinit, thetas, l, mode, seed);
}

LatticeRun lattice_evolve(const LatticeField& field, CoinPair reinit, std::span<const double> thetas, double l,
                          MeasureMode mode, std::uint64_t seed) {
  const std::int64_t m = sites_per_step(field.spacing, l);
  const auto n = static_cast<std::int64_t>(field.sites.size());
  rng::Engine engine = rng::make_stream(seed, 0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  LatticeRun run{field, {}, {}};
  std::vector<CoinPair>& cur = run.field.sites;
  std::vector<CoinPair> next(cur.size());
  for (std::size_t step = 0; step < thetas.size(); ++step) {
    // |R> moves m sites right, |L> m sites left; amplitude pushed past the ends is lost.
    std::fill(next.begin(), next.end(), CoinPair{});
    for (std::int64_t j = 0; j < n; ++j) {
      if (j + m < n) next[static_cast<std::size_t>(j + m)].r = cur[static_cast<std::size_t>(j)].r;
      if (j - m >= 0) next[static_cast<std::size_t>(j - m)].l = cur[static_cast<std::size_t>(j)].l;
    }
    const double c = std::cos(thetas[step]);
    const double s = std::sin(thetas[step]);
    for (auto& site : next) site = {c * site.r - s * site.l, s * site.r + c * site.l};
    std::swap(cur, next);
    if (mode == MeasureMode::Coherent) continue;

    double p_r = 0.0;
    double p_l = 0.0;
    for (const auto& site : cur) {
      p_r += std::norm(site.r);
      p_l += std::norm(site.l);
    }
    const double total = p_r + p_l;
    bool right = mode == MeasureMode::ForceRight;
    if (mode == MeasureMode::Sample) right = uniform(engine) < p_r / total;
    const double kept = right ? p_r : p_l;
    if (kept == 0.0) throw std::invalid_argument("measurement outcome has zero probability");
    run.record.push_back(right ? 'R' : 'L');
    run.outcome_probability.push_back(kept / total);

    const double scale = 1.0 / std::sqrt(kept * field.spacing);
    const bool last = step + 1 == thetas.size();
    for (auto& site : cur) {
      const Complex g = scale * (right ? site.r : site.l);
      if (last)
        site = right ? CoinPair{g, 0.0} : CoinPair{0.0, g};
      else
        site = {reinit.r * g, reinit.l * g};
    }
  }
  return run;
}

SampleStatistics statistics_from_histogram(std::span<const std::uint64_t> hist, double offset, double scale) {
  SampleStatistics st;
  double count = 0.0;
  double m1 = 0.0;
  for (std::size_t n = 0; n < hist.size(); ++n) {
    const double x = offset + scale * static_cast<double>(n);
    count += static_cast<double>(hist[n]);
    m1 += static_cast<double>(hist[n]) * x;
  }
  if (count < 2.0) throw std::invalid_argument("statistics need at least two samples");
  m1 /= count;
  double c2 = 0.0;
  double c4 = 0.0;
  for (std::size_t n = 0; n < hist.size(); ++n) {
    const double d = offset + scale * static_cast<double>(n) - m1;
    c2 += static_cast<double>(hist[n]) * d * d;
    c4 += static_cast<double>(hist[n]) * d * d * d * d;
  }
  const double var_pop = c2 / count;
  st.mean = m1;
  st.variance = c2 / (count - 1.0);
  st.mean_stderr = std::sqrt(st.variance / count);
  st.variance_stderr = std::sqrt(std::max(c4 / count - var_pop * var_pop, 0.0) / count);
  st.samples = static_cast<std::uint64_t>(count);
  return st;
}

SampleStatistics monte_carlo_measured_mode(double p_r, double l1, double l2, std::int64_t t, std::uint64_t n_samples,
                                           std::uint64_t seed) {
  if (n_samples < 10000) throw std::invalid_argument("Monte Carlo oracle needs at least 10^4 samples");
  const auto hist = kernels::bernoulli_histogram_parallel(p_r, t, n_samples, seed);
  // n R outcomes: n l1 + (t - n) l2 = t l2 + n (l1 - l2)
  SampleStatistics st = statistics_from_histogram(hist, static_cast<double>(t) * l2, l1 - l2);
  st.seed = seed;
  return st;
}

SampleStatistics monte_carlo_particle_walk(const Mat2& coin, CoinPair start, std::int64_t t, std::uint64_t n_samples,
                                           std::uint64_t seed, double step_length) {
  if (t < 0) throw std::invalid_argument("step count must be non-negative");
  if (n_samples < 2) throw std::invalid_argument("Monte Carlo walk needs at least two samples");
  // Once collapsed the coin is |R> or |L>, so the branch probabilities are fixed numbers.
  const double p_from_r = std::norm(coin(0, 0));  // P(R | coin was R)
  const double p_from_l = std::norm(coin(0, 1));  // P(R | coin was L)
  const CoinPair first = coin * start;
  const double p_first = std::norm(first.r) / first.norm_squared();
  const rng::BernoulliThreshold draw_first(p_first);
  const rng::BernoulliThreshold draw_r(p_from_r);
  const rng::BernoulliThreshold draw_l(p_from_l);

  const auto bins = static_cast<std::size_t>(t) + 1;  // index = number of right moves
  std::vector<std::uint64_t> hist(bins, 0);
  const auto blocks = static_cast<std::ptrdiff_t>((n_samples + rng::kBlockSize - 1) / rng::kBlockSize);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(dynamic, 1) nowait
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      rng::Engine engine = rng::make_stream(seed, static_cast<std::uint64_t>(b));
      const std::uint64_t begin = static_cast<std::uint64_t>(b) * rng::kBlockSize;
      const std::uint64_t count = std::min(rng::kBlockSize, n_samples - begin);
      for (std::uint64_t i = 0; i < count; ++i) {
        std::int64_t rights = 0;
        bool coin_r = true;
        for (std::int64_t s = 0; s < t; ++s) {
          const bool go_right = s == 0 ? draw_first(engine) : (coin_r ? draw_r(engine) : draw_l(engine));
          rights += go_right ? 1 : 0;
          coin_r = go_right;
        }
        ++local[static_cast<std::size_t>(rights)];
      }
    }
#pragma omp critical
    for (std::size_t i = 0; i < bins; ++i) hist[i] += local[i];
  }
  // position = (2 rights - t) * step_length
  SampleStatistics st = statistics_from_histogram(hist, -static_cast<double>(t) * step_length, 2.0 * step_length);
  st.seed = seed;
  return st;
}

BranchCheck binomial_branch_check(double a_r, double a_l, double theta, double k, double l, std::int64_t t) {
  if (t < 0 || t > kMaxEnumeratedSteps) throw std::invalid_argument("branch check is limited to 0 <= t <= 30");
  const MeasuredStepResult step = measured_step(a_r, a_l, theta, k, l);
  const std::vector<BranchEntry> table = branch_distribution(step, t);

  const CoinPair b = measured_branches_direct(CoinPair{a_r, a_l}, k, l, theta);
  const double q_r = std::norm(b.r);
  const double q_l = std::norm(b.l);
  // Composition: probability of n R outcomes after s steps, built one step at a time.
  std::vector<double> prob{1.0};
  for (std::int64_t s = 0; s < t; ++s) {
    std::vector<double> nxt(prob.size() + 1, 0.0);
    for (std::size_t n = 0; n < prob.size(); ++n) {
      nxt[n] += prob[n] * q_l;
      nxt[n + 1] += prob[n] * q_r;
    }
    prob = std::move(nxt);
  }

  BranchCheck out;
  for (const auto& e : table) {
    const auto n = static_cast<std::size_t>(e.n);
    out.probability_sum += e.probability;
    out.max_probability_deviation = std::max(out.max_probability_deviation, std::abs(e.probability - prob[n]));
    // One history's amplitude: closed-form magnitudes and displacement vs the product of direct amplitudes.
    const double mag = std::pow(step.p_r, 0.5 * static_cast<double>(e.n)) *
                       std::pow(step.p_l, 0.5 * static_cast<double>(t - e.n));
    const Complex closed = std::polar(mag, k * e.displacement);
    Complex composed{1.0, 0.0};
    for (std::int64_t s = 0; s < e.n; ++s) composed *= b.r;
    for (std::int64_t s = e.n; s < t; ++s) composed *= b.l;
    const double dev = std::abs(closed - composed);
    if (dev > out.max_amplitude_deviation) {
      out.max_amplitude_deviation = dev;
      out.worst_n = e.n;
    }
  }
  return out;
}

}  // namespace qwalk::oracle

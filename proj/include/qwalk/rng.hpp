#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qwalk::rng {

using Engine = std::mt19937_64;

/// Recorded in output metadata next to the seed.
inline constexpr const char* kGeneratorName = "mt19937_64 (streams split by splitmix64)";

/// Trajectories are drawn in fixed-size blocks; block b always uses stream b.
inline constexpr std::uint64_t kBlockSize = 4096;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `stream` derived from the user seed:
///   splitmix64(seed ^ splitmix64(stream)).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

inline Engine make_stream(std::uint64_t seed, std::uint64_t stream) { return Engine(stream_seed(seed, stream)); }

/// Bernoulli(p) from 32-bit uniforms: u < threshold. p is quantized to 2^-32, and p >= 1
/// gives threshold 2^32, which every 32-bit value is below.
struct BernoulliThreshold {
  std::uint64_t threshold = 0;

  explicit BernoulliThreshold(double p) {
    if (p >= 1.0)
      threshold = std::uint64_t{1} << 32;
    else if (p > 0.0)
      threshold = static_cast<std::uint64_t>(std::ldexp(p, 32));
  }

  bool hit(std::uint32_t u) const { return u < threshold; }
  /// One trial from the high half of a fresh engine output.
  bool operator()(Engine& e) const { return hit(static_cast<std::uint32_t>(e() >> 32)); }
};

}  // namespace qwalk::rng

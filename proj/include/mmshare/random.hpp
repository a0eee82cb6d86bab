#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mmshare/units.hpp"

namespace mmshare {

/// Weyl increment used by the SplitMix64 stream (2^64 / golden ratio).
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer. Bijective on 64-bit words, so distinct inputs map to
/// distinct outputs.
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

struct TrialSeed {
  std::uint64_t value = 0;
  std::uint64_t trial_index = 0;

  bool operator==(const TrialSeed&) const = default;
};

/// Seed for trial k of a campaign: the k-th output of a SplitMix64 stream
/// started at `master_seed`. Pure and platform-independent. For a fixed
/// master seed the map k -> value is injective (odd Weyl step composed with a
/// bijective mixer), and for a fixed k it is injective in the master seed.
inline TrialSeed derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return TrialSeed{splitmix64_mix(master_seed + (trial_index + 1) * kGoldenGamma), trial_index};
}

/// Independent substream of an existing seed, used when a trial has to be
/// redrawn (substream 0 is the first attempt).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t substream) {
  return splitmix64_mix(seed + (substream + 1) * kGoldenGamma);
}

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is pinned by the
/// standard. The distribution transforms below are implemented here rather
/// than with std::*_distribution because the standard leaves those algorithms
/// unspecified; with fixed transforms a (config, seed) pair reproduces
/// bit-identical results on any platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Box-Muller transform (cosine branch).
  double normal(double mean = 0.0, double stddev = 1.0) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * kPi * u2);
  }

  /// Exact Poisson sampler (product-of-uniforms), chunked so the running
  /// product stays far from the underflow threshold for any mean.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 500.0) {
      total += poisson_small(500.0);
      mean -= 500.0;
    }
    return total + poisson_small(mean);
  }

  /// Unbiased integer on [0, n) via rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span + 1) % span;
    std::uint64_t draw = engine_();
    while (draw > limit) draw = engine_();
    return static_cast<std::size_t>(draw % span);
  }

 private:
  std::uint64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double threshold = std::exp(-mean);
    std::uint64_t count = 0;
    double product = uniform();
    while (product > threshold) {
      ++count;
      product *= uniform();
    }
    return count;
  }

  std::mt19937_64 engine_;
};

}  // namespace mmshare

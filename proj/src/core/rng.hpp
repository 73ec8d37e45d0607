#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rcf {

// Counter-based deterministic RNG. Every consumer derives its values from
// (seed, stream, counter) alone, so results are independent of evaluation
// order and thread schedule: sample i of a Monte Carlo run always sees the
// same draws no matter which worker computes it.
inline std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// One logical stream of draws. Cheap to construct; state is three integers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return counter_hash(seed_, stream_, counter_++); }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]; safe as a log() argument
  double next_open_double() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // unbiased-enough bounded draw via multiply-high; n must be > 0
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // standard normal, basic Box-Muller (second root discarded for simplicity)
  double next_gaussian() {
    const double u1 = next_open_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // normal truncated to [lo, hi]; rejection with a deterministic clamp fallback
  double next_gaussian_trunc(double mean, double sd, double lo, double hi) {
    if (sd <= 0.0) return mean < lo ? lo : (mean > hi ? hi : mean);
    for (int tries = 0; tries < 100; ++tries) {
      const double v = mean + sd * next_gaussian();
      if (v >= lo && v <= hi) return v;
    }
    const double v = mean;
    return v < lo ? lo : (v > hi ? hi : v);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// Tags keeping independent subsystems on disjoint streams of the same seed.
namespace rng_tag {
inline constexpr std::uint64_t bootstrap = 0x01;
inline constexpr std::uint64_t monte_carlo = 0x02;
inline constexpr std::uint64_t sim_pool = 0x03;
inline constexpr std::uint64_t sim_calibration = 0x04;
inline constexpr std::uint64_t sim_bootstrap = 0x05;
}  // namespace rng_tag

// Stream id for element `index` of subsystem `tag`.
inline std::uint64_t stream_id(std::uint64_t tag, std::uint64_t index) {
  return mix64((tag << 56) ^ index);
}

}  // namespace rcf

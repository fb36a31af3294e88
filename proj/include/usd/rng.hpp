#pragma once

#include <cmath>
#include <cstdint>

namespace usd::rng {

// splitmix64: fixed 64-bit generator used for every stochastic operation in
// the toolkit, so reports are reproducible across builds of the artifact.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal pair via Box-Muller
  void next_gaussian_pair(double& g0, double& g1) {
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    g0 = r * std::cos(6.283185307179586476925286766559 * u2);
    g1 = r * std::sin(6.283185307179586476925286766559 * u2);
  }
};

// Decorrelated substream for (seed, index). Used per shot / per trial, which
// makes sampled tallies independent of how the work is sharded over threads.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (index * 0xD2B74407B1CE6E93ULL + 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
  z ^= z >> 33;
  return SplitMix64{z};
}

inline constexpr const char* kGeneratorName = "splitmix64";

}  // namespace usd::rng

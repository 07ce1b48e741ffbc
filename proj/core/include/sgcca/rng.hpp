#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sgcca {

// Deterministic random source. std::mt19937_64 output is pinned by the
// standard, and the distributions below are implemented here because the
// std::*_distribution sequences differ between standard libraries. Identical
// seeds therefore give bit-identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller; consumes two engine draws, no caching.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static constexpr double two_pi = 6.283185307179586476925286766559;
  std::mt19937_64 engine_;
};

// splitmix64-style mix for carving independent streams out of one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sgcca

#pragma once

// Seeded random streams for the problem generators.
//
// SplitMix64: the state advances by the odd constant 0x9E3779B97F4A7C15 and
// each output is the finalizer mix of the new state. Uniform doubles take the
// top 53 bits; normals use one Box-Muller draw per pair of uniforms (cosine
// branch only). The recipe is fixed so that other implementations can
// reproduce the same streams bit for bit.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace osga::problems {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const auto r = static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    return r < bound ? r : bound - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace osga::problems

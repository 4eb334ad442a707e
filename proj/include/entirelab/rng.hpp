#pragma once

#include <cstdint>
#include <random>

#include "entirelab/log_scale.hpp"

namespace entirelab {

/// Seeded generator with explicitly coded distributions, so identical seeds
/// give identical streams on every platform and standard library.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(engine() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Uniform on the closed unit disk (rejection sampling).
  Complex unit_disk() {
    for (;;) {
      double x = 2.0 * unit() - 1.0, y = 2.0 * unit() - 1.0;
      if (x * x + y * y <= 1.0) return {x, y};
    }
  }

  Complex unit_circle() { return cis(kTwoPi * unit()); }
};

}  // namespace entirelab

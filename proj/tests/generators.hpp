#pragma once

#include <cstdint>
#include <random>

#include "spinlab/lie_core.hpp"

namespace gen {

using spinlab::cd;
using spinlab::RVec;

/// Small seeded source for property tests.
class Source {
public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::uint64_t seed() { return rng_(); }

  /// Complex number away from the real-axis poles of cot(z/2).
  cd z_off_axis() { return cd(uniform(-3.0, 3.0), (uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uniform(0.3, 2.0)); }

  /// Strictly decreasing q with gaps in [0.3, 1.2].
  RVec ordered_q(int n) {
    RVec q(n);
    double v = uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
      q(i) = v;
      v -= uniform(0.3, 1.2);
    }
    return q;
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace gen

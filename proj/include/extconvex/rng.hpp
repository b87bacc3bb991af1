#pragma once

#include <cmath>
#include <cstdint>

namespace extconvex {

/// Deterministic, platform-independent RNG (splitmix64).  All randomized
/// procedures in the library take explicit seeds and derive independent
/// streams with `fork`, so results do not depend on call interleaving.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller (fresh pair each call, first returned).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Independent substream for task index i.
  Rng fork(std::uint64_t i) const {
    Rng r(state_ ^ (0x9e3779b97f4a7c15ULL * (i + 0x632be59bd9b4e019ULL)));
    r.next_u64();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace extconvex

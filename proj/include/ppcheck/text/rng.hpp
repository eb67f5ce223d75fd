#pragma once

#include <cmath>
#include <cstdint>

namespace ppcheck {

// splitmix64: tiny, fully specified, reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) {
    return next_u64() % bound;
  }

  // standard normal via Box-Muller
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t state_;
};

// Stateless counter-based coin used for dropout masks: the mask depends only
// on (seed, counter), so training replays are reproducible.
inline bool counter_coin(std::uint64_t seed, std::uint64_t counter,
                         double keep_prob) {
  Rng r(seed ^ (counter * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL));
  return r.next_double() < keep_prob;
}

}  // namespace ppcheck

#pragma once

#include <cstdint>

namespace rekit {

/// Counter-based pseudo-random stream: the i-th draw of trial t under seed s
/// is a pure function of (s, t, i), so randomized reports are reproducible
/// from (seed, trial index) alone and trials can run in any order or thread.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial)
      : key_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(trial + 0x632be59bd9b4e019ull)),
        counter_(0) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace rekit

#pragma once

#include <cstdint>

namespace lockkey {

/// 64-bit linear congruential generator with a fixed, documented recurrence
///   state <- 6364136223846793005 * state + 1442695040888963407 (mod 2^64)
/// so seeded "random" inputs are portable across implementations. The
/// initial state is the seed; each draw advances first, then reads.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  /// Top 53 bits as a double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double low, double high) { return low + (high - low) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace lockkey

#pragma once

#include <cstdint>

namespace affine_energy {

/// xorshift64* (Vigna 2016): shifts 12/25/27, output multiplier
/// 0x2545F4914F6CDD1D. The state is the seed XOR 0x9E3779B97F4A7C15, with
/// an all-zero state replaced by that constant. Every random experiment in
/// the library draws from this generator, so outputs are reproducible
/// bit-for-bit in any language.
class Xorshift64Star {
 public:
  static constexpr std::uint64_t kSeedMask = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kMultiplier = 0x2545F4914F6CDD1DULL;

  explicit Xorshift64Star(std::uint64_t seed) : state_(seed ^ kSeedMask) {
    if (state_ == 0) state_ = kSeedMask;
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12U;
    state_ ^= state_ << 25U;
    state_ ^= state_ >> 27U;
    return state_ * kMultiplier;
  }

  /// Uniform in [0, bound) by rejection of the biased low range.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace affine_energy

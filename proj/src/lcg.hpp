#pragma once

#include <cstdint>

namespace nasch {

// Affine coefficients (mul, add) whose application to a generator state
// equals `span` sequential draws: s' = (mul*s + add) mod m.
struct JumpCoefficients {
  std::uint64_t mul = 1;
  std::uint64_t add = 0;
  std::uint64_t span = 0;
};

// Linear congruential generator with O(log k) jump-ahead.
//
// Defaults to the minimal-standard multiplicative generator
// (a = 48271, c = 0, m = 2^31 - 1), numerically identical to
// std::minstd_rand. The modulus must stay below 2^32 so that every
// product fits in 64 bits; all arithmetic is exact.
struct Lcg {
  static constexpr std::uint64_t kDefaultMultiplier = 48271;
  static constexpr std::uint64_t kDefaultModulus = 2147483647;  // 2^31 - 1

  std::uint64_t multiplier = kDefaultMultiplier;
  std::uint64_t increment = 0;
  std::uint64_t modulus = kDefaultModulus;
  std::uint64_t state = 1;

  static Lcg seeded(std::uint64_t seed);

  // state = seed mod m; a multiplicative generator (c = 0) cannot sit at
  // zero, so that case escapes to 1.
  void reseed(std::uint64_t seed);

  // Advances one draw and returns the new state.
  std::uint64_t next() {
    // The default modulus as a literal lets the compiler strength-reduce
    // the division; the generic path handles reconfigured generators.
    if (modulus == kDefaultModulus) {
      state = (multiplier * state + increment) % kDefaultModulus;
    } else {
      state = (multiplier * state + increment) % modulus;
    }
    return state;
  }

  // Advances one draw; returns state / m in binary64. Draws of the
  // multiplicative generator lie in [1, m-1], so the result is in (0, 1).
  double uniform01() {
    return static_cast<double>(next()) / static_cast<double>(modulus);
  }

  void apply(const JumpCoefficients& jc) {
    state = (jc.mul * state + jc.add) % modulus;
  }

  // Equivalent to draw_count sequential next() calls.
  void jump(std::uint64_t draw_count);
};

// Computes (a^k mod m, c*(a^{k-1} + ... + a + 1) mod m) by binary doubling
// on the pair, so a jump of any span costs O(log k) multiplications.
JumpCoefficients jump_coefficients(const Lcg& gen, std::uint64_t draw_count);

}  // namespace nasch

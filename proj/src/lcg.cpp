#include "lcg.hpp"

namespace nasch {

Lcg Lcg::seeded(std::uint64_t seed) {
  Lcg gen;
  gen.reseed(seed);
  return gen;
}

void Lcg::reseed(std::uint64_t seed) {
  state = seed % modulus;
  if (increment == 0 && state == 0) {
    state = 1;
  }
}

void Lcg::jump(std::uint64_t draw_count) {
  apply(jump_coefficients(*this, draw_count));
}

JumpCoefficients jump_coefficients(const Lcg& gen, std::uint64_t draw_count) {
  const std::uint64_t m = gen.modulus;
  // Composing a jump of i draws (Ai, Ci) with one of j draws (Aj, Cj)
  // gives (Ai*Aj, Aj*Ci + Cj); accumulate square-and-multiply style.
  std::uint64_t mul = 1 % m;
  std::uint64_t add = 0;
  std::uint64_t base_mul = gen.multiplier % m;
  std::uint64_t base_add = gen.increment % m;
  for (std::uint64_t k = draw_count; k > 0; k >>= 1) {
    if (k & 1) {
      mul = (base_mul * mul) % m;
      add = (base_mul * add + base_add) % m;
    }
    base_add = (base_mul * base_add + base_add) % m;
    base_mul = (base_mul * base_mul) % m;
  }
  return {mul, add, draw_count};
}

}  // namespace nasch

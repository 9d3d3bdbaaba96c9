#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>

#include "lcg.hpp"

using nasch::Lcg;
using nasch::JumpCoefficients;
using nasch::jump_coefficients;

TEST_CASE("first draws from small seeds") {
  Lcg a = Lcg::seeded(1);
  CHECK(a.next() == 48271);
  Lcg b = Lcg::seeded(2);
  CHECK(b.next() == 96542);
}

TEST_CASE("seeding reduces modulo m and escapes the absorbing zero") {
  CHECK(Lcg::seeded(1).state == 1);
  CHECK(Lcg::seeded(0).state == 1);
  CHECK(Lcg::seeded(2147483647ull).state == 1);  // m maps to 0, then to 1
  CHECK(Lcg::seeded(2147483647ull + 5).state == 5);
  CHECK(Lcg::seeded(7).state == 7);
}

TEST_CASE("sequence agrees with std::minstd_rand") {
  Lcg gen = Lcg::seeded(20260823);
  std::minstd_rand ref(20260823);
  for (int i = 0; i < 1000; ++i) {
    CHECK(gen.next() == ref());
  }
}

TEST_CASE("ten-thousandth draw from seed 1") {
  Lcg gen = Lcg::seeded(1);
  std::uint64_t draw = 0;
  for (int i = 0; i < 10000; ++i) draw = gen.next();
  CHECK(draw == 399268537);
}

TEST_CASE("jump equals repeated stepping at frozen spans") {
  struct Row {
    std::uint64_t seed;
    std::uint64_t span;
    std::uint64_t state;
  };
  // States computed by plain sequential stepping in an unrelated
  // big-integer implementation.
  const Row rows[] = {
      {1, 2, 182605794},          {1, 7, 1105902161},
      {1, 100, 1358404307},       {1, 12345, 1941600346},
      {1, 1000000, 1263606197},   {42, 1, 2027382},
      {42, 2, 1226992407},        {42, 7, 1350734175},
      {42, 100, 1218406072},      {42, 12345, 2090319593},
      {42, 1000000, 1531852746},  {1073741824, 1, 1073765959},
      {1073741824, 2, 91302897},  {1073741824, 7, 1626692904},
      {1073741824, 100, 1752943977},
      {1073741824, 12345, 970800173},
      {1073741824, 1000000, 1705544922},
  };
  for (const Row& row : rows) {
    CAPTURE(row.seed);
    CAPTURE(row.span);
    Lcg gen = Lcg::seeded(row.seed);
    gen.jump(row.span);
    CHECK(gen.state == row.state);
  }
}

TEST_CASE("jump by zero is the identity") {
  Lcg gen = Lcg::seeded(123);
  const std::uint64_t before = gen.state;
  gen.jump(0);
  CHECK(gen.state == before);
}

TEST_CASE("jump by one equals one draw") {
  Lcg stepped = Lcg::seeded(99);
  stepped.next();
  Lcg jumped = Lcg::seeded(99);
  jumped.jump(1);
  CHECK(jumped.state == stepped.state);
}

TEST_CASE("jumps compose additively") {
  for (std::uint64_t k1 : {0ull, 1ull, 3ull, 17ull, 1000ull}) {
    for (std::uint64_t k2 : {0ull, 2ull, 5ull, 999ull}) {
      Lcg split = Lcg::seeded(7);
      split.jump(k1);
      split.jump(k2);
      Lcg whole = Lcg::seeded(7);
      whole.jump(k1 + k2);
      CHECK(split.state == whole.state);
    }
  }
}

TEST_CASE("degenerate jump coefficients") {
  const Lcg base = Lcg::seeded(1);
  const JumpCoefficients identity = jump_coefficients(base, 0);
  CHECK(identity.mul == 1);
  CHECK(identity.add == 0);
  const JumpCoefficients one = jump_coefficients(base, 1);
  CHECK(one.mul == 48271);
  CHECK(one.add == 0);
}

TEST_CASE("precomputed jump coefficients replay a span") {
  const Lcg base = Lcg::seeded(1);
  const JumpCoefficients coeff = jump_coefficients(base, 1000000);
  Lcg gen = base;
  gen.apply(coeff);
  CHECK(gen.state == 1263606197);
  CHECK(coeff.span == 1000000);
  // With increment 0 the composite multiplier is the jumped state of
  // seed 1 itself.
  CHECK(coeff.mul == 1263606197);
  CHECK(coeff.add == 0);
}

TEST_CASE("coefficients can be reapplied from any state") {
  const Lcg base = Lcg::seeded(5);
  const JumpCoefficients coeff = jump_coefficients(base, 12345);
  for (std::uint64_t seed : {1ull, 42ull, 77777ull}) {
    Lcg jumped = Lcg::seeded(seed);
    jumped.apply(coeff);
    Lcg stepped = Lcg::seeded(seed);
    for (int i = 0; i < 12345; ++i) stepped.next();
    CHECK(jumped.state == stepped.state);
  }
}

TEST_CASE("uniform01 is the state scaled into the unit interval") {
  Lcg first = Lcg::seeded(1);
  CHECK(first.uniform01() == 48271.0 / 2147483647.0);

  Lcg gen = Lcg::seeded(31337);
  for (int i = 0; i < 100; ++i) {
    Lcg copy = gen;
    const double u = gen.uniform01();
    const double expected =
        static_cast<double>(copy.next()) / 2147483647.0;
    CHECK(u == expected);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform01 long-run mean is near one half") {
  Lcg gen = Lcg::seeded(1);
  double sum = 0.0;
  for (int i = 0; i < 1000000; ++i) sum += gen.uniform01();
  CHECK(sum / 1e6 == doctest::Approx(0.4997635306662361).epsilon(1e-12));
}

TEST_CASE("no short cycle within a million draws") {
  Lcg gen = Lcg::seeded(1);
  bool returned = false;
  for (int i = 0; i < 1000000; ++i) {
    if (gen.next() == 1) {
      returned = true;
      break;
    }
  }
  CHECK_FALSE(returned);
}

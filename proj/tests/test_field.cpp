#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "syzygy/field.hpp"

using namespace syz;

TEST_CASE("field spec validation") {
  CHECK_NOTHROW(FieldSpec::prime(32003));
  CHECK_NOTHROW(FieldSpec::prime(65537));
  CHECK_THROWS_AS(FieldSpec::prime(32004), config_error);
  CHECK_THROWS_AS(FieldSpec::prime(1), config_error);
  CHECK_THROWS_AS(FieldSpec::prime(1ull << 32), config_error);
  CHECK(FieldSpec::rationals().describe() == "QQ");
  CHECK(FieldSpec::prime(32003).describe() == "GF(32003)");
}

TEST_CASE("is_prime small values") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(32003));
  CHECK(is_prime(65537));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(32001));  // 3 * 10667
}

TEST_CASE("prime field arithmetic agrees with naive modular arithmetic") {
  std::mt19937 rng(7);
  for (std::uint64_t p : {5ull, 101ull, 32003ull, 65537ull, 2147483647ull}) {
    PrimeField f(p);
    std::uniform_int_distribution<std::uint64_t> pick(0, p - 1);
    for (int i = 0; i < 200; ++i) {
      std::uint64_t a = pick(rng), b = pick(rng);
      CHECK(f.add(a, b) == (a + b) % p);
      CHECK(f.sub(a, b) == (a + p - b) % p);
      CHECK(f.mul(a, b) == (a * b) % p);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
    }
    CHECK(f.from_int(-1) == p - 1);
    CHECK(f.is_minus_one(f.from_int(-1)));
    CHECK(f.from_int(static_cast<std::int64_t>(p)) == 0);
  }
}

TEST_CASE("rational field basics") {
  RationalField f;
  Rational a(2, 3), b(-1, 6);
  CHECK(f.add(a, b) == Rational(1, 2));
  CHECK(f.mul(a, f.inv(a)) == 1);
  CHECK(f.is_minus_one(Rational(-1)));
}

TEST_CASE("field mode descriptions") {
  CHECK(FieldMode::certified().describe() == "certified(GF(32003),GF(65537))");
  CHECK_THROWS_AS(FieldMode::certified(7, 7), config_error);
}

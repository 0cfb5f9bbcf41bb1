#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qsec/rational.hpp"

using namespace qsec;

namespace {
Rational Q(const std::string& s) { return parse_rational(s); }
FiberPos F(const std::string& s) { return FiberPos(parse_rational(s)); }
}  // namespace

TEST_CASE("rational parsing and canonical formatting") {
  CHECK(Q("3/4") == Rational(3, 4));
  CHECK(Q("-1/3") == Rational(-1, 3));
  CHECK(Q("7") == Rational(7));
  CHECK(Q("+2/6") == Rational(1, 3));
  CHECK(Q(" -5/10 ") == Rational(-1, 2));
  CHECK(Q("\xe2\x88\x92"
          "5/3") == Rational(-5, 3));  // U+2212 minus sign

  CHECK(to_string(Rational(1, 3)) == "1/3");
  CHECK(to_string(Rational(-1, 3)) == "-1/3");
  CHECK(to_string(Rational(14)) == "14");
  CHECK(to_string(Q("2/6")) == "1/3");

  CHECK_THROWS_AS(Q(""), std::invalid_argument);
  CHECK_THROWS_AS(Q("   "), std::invalid_argument);
  CHECK_THROWS_AS(Q("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Q("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Q("1/2/3"), std::invalid_argument);
  CHECK_THROWS_AS(Q("-"), std::invalid_argument);
  CHECK_THROWS_AS(Q("1.5"), std::invalid_argument);
}

TEST_CASE("rational arithmetic is exact on random triples") {
  std::mt19937_64 gen(7);
  auto rnd = [&]() {
    long long n = static_cast<long long>(gen() % 2001) - 1000;
    long long d = 1 + static_cast<long long>(gen() % 50);
    return Rational(n, d);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Rational a = rnd(), b = rnd(), c = rnd();
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("frac reduces mod 1 into [0,1)") {
  CHECK(frac(Rational(7, 4)) == Rational(3, 4));
  CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
  CHECK(frac(Rational(0)) == Rational(0));
  CHECK(frac(Rational(5)) == Rational(0));
  CHECK(frac(Rational(-9, 4)) == Rational(3, 4));

  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    Rational x(static_cast<long long>(gen() % 4001) - 2000,
               1 + static_cast<long long>(gen() % 60));
    CHECK(frac(x + 1) == frac(x));
    CHECK(frac(x) >= 0);
    CHECK(frac(x) < 1);
  }
}

TEST_CASE("centered_lift picks the representative in [-1/2, 1/2)") {
  CHECK(centered_lift(Rational(3, 4)) == Rational(-1, 4));
  CHECK(centered_lift(Rational(1, 4)) == Rational(1, 4));
  CHECK(centered_lift(Rational(1, 2)) == Rational(-1, 2));
  CHECK(centered_lift(Rational(-1, 2)) == Rational(-1, 2));
  CHECK(centered_lift(Rational(5)) == Rational(0));
}

TEST_CASE("fiber positions compare mod 1 and rotate") {
  CHECK(F("5/4") == F("1/4"));
  CHECK(F("0") != F("1/2"));
  CHECK(F("3/4").rotated(Rational(1, 2)) == F("1/4"));
  CHECK(F("0").rotated(Rational(-1, 8)) == F("7/8"));
}

TEST_CASE("ccw_distance wraps counterclockwise") {
  CHECK(ccw_distance(F("1/4"), F("3/4")) == Rational(1, 2));
  CHECK(ccw_distance(F("3/4"), F("1/4")) == Rational(1, 2));
  CHECK(ccw_distance(F("1/3"), F("1/3")) == Rational(0));
  CHECK(ccw_distance(F("9/10"), F("1/10")) == Rational(1, 5));

  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    FiberPos a(Rational(static_cast<long long>(gen() % 97), 97));
    FiberPos b(Rational(static_cast<long long>(gen() % 89), 89));
    Rational sum = ccw_distance(a, b) + ccw_distance(b, a);
    if (a == b) {
      CHECK(sum == 0);
    } else {
      CHECK(sum == 1);
    }
  }
}

TEST_CASE("cyclic_open_contains tests the open ccw arc") {
  CHECK(cyclic_open_contains(F("0"), F("1/2"), F("1/4")));
  CHECK_FALSE(cyclic_open_contains(F("1/2"), F("0"), F("1/4")));
  CHECK(cyclic_open_contains(F("3/4"), F("1/4"), F("0")));  // arc wraps 0
  CHECK(cyclic_open_contains(F("3/4"), F("1/4"), F("9/10")));
  CHECK_FALSE(cyclic_open_contains(F("0"), F("1/2"), F("0")));    // endpoint
  CHECK_FALSE(cyclic_open_contains(F("0"), F("1/2"), F("1/2")));  // endpoint
  CHECK_FALSE(cyclic_open_contains(F("0"), F("1/2"), F("2/3")));
  CHECK_THROWS_AS(cyclic_open_contains(F("1/4"), F("1/4"), F("0")),
                  std::invalid_argument);
}

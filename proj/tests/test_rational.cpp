#include "dynstore/rational.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace dynstore;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational(" 5 / 2 ") == Rational(5, 2));
  CHECK(parse_rational("4/95") == Rational(4, 95));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
}

TEST_CASE("fraction rendering") {
  CHECK(to_fraction_string(Rational(214)) == "214");
  CHECK(to_fraction_string(Rational(865, 4)) == "865/4");
  CHECK(to_fraction_string(Rational(-1, 3)) == "-1/3");
}

TEST_CASE("decimal rendering rounds half away from zero and trims zeros") {
  CHECK(to_decimal_string(Rational(214)) == "214");
  CHECK(to_decimal_string(Rational(865, 4)) == "216.25");
  CHECK(to_decimal_string(Rational(39, 4)) == "9.75");
  CHECK(to_decimal_string(Rational(507, 2)) == "253.5");
  CHECK(to_decimal_string(Rational(3549, 20)) == "177.45");
  // 141/38 = 3.71052... -> one decimal place gives the printed "+3.7".
  CHECK(to_decimal_string(Rational(141, 38), 1) == "3.7");
  CHECK(to_decimal_string(Rational(141, 38)) == "3.7105");
  CHECK(to_decimal_string(Rational(1, 3), 4) == "0.3333");
  CHECK(to_decimal_string(Rational(2, 3), 4) == "0.6667");
  CHECK(to_decimal_string(Rational(-1, 8), 2) == "-0.13");
  CHECK(to_decimal_string(Rational(0)) == "0");
}

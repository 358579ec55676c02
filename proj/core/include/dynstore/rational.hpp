#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace dynstore {

// All bandwidths, weights and cut values are exact rationals so that
// closed-form-vs-oracle comparisons are equalities, never tolerances.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "7", "-3/4", "  5 / 2 ". Throws std::invalid_argument on anything
// else (including a zero denominator).
Rational parse_rational(const std::string& text);

// "p/q" with q > 0, or just "p" for integers.
std::string to_fraction_string(const Rational& value);

// Decimal rendering with at most `max_decimals` fractional digits, rounded
// half away from zero, trailing zeros trimmed. Exact integer division; no
// detour through floating point.
std::string to_decimal_string(const Rational& value, int max_decimals = 4);

double to_double(const Rational& value);

} // namespace dynstore

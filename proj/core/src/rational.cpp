#include "dynstore/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace dynstore {

namespace {

std::string strip(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

BigInt parse_integer(const std::string& s) {
  std::string t = strip(s);
  if (t.empty()) throw std::invalid_argument("empty integer in rational literal");
  size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
  if (i == t.size()) throw std::invalid_argument("sign without digits in rational literal");
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
      throw std::invalid_argument("invalid rational literal: '" + s + "'");
    }
  }
  return BigInt(t);
}

} // namespace

Rational parse_rational(const std::string& text) {
  const std::string t = strip(text);
  const size_t slash = t.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_integer(t));
  }
  BigInt num = parse_integer(t.substr(0, slash));
  BigInt den = parse_integer(t.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in rational literal: '" + text + "'");
  return Rational(num, den);
}

std::string to_fraction_string(const Rational& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal_string(const Rational& value, int max_decimals) {
  if (max_decimals < 0) max_decimals = 0;
  BigInt num = numerator(value);
  const BigInt den = denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;

  BigInt scale = 1;
  for (int i = 0; i < max_decimals; ++i) scale *= 10;

  // Round half away from zero at the last kept digit.
  BigInt scaled = (num * scale * 2 + den) / (den * 2);
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;

  std::string out = whole.str();
  if (frac != 0) {
    std::string digits = frac.str();
    digits.insert(digits.begin(), max_decimals - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  if (negative && (whole != 0 || frac != 0)) out.insert(out.begin(), '-');
  return out;
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

} // namespace dynstore

#include "nervekit/rational.hpp"

#include <stdexcept>

namespace nervekit {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
}

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

BigInt ipow(std::int64_t n, int e) {
  BigInt out = 1;
  for (int i = 0; i < e; ++i) out *= n;
  return out;
}

}  // namespace nervekit

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace nervekit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

// Parses "p/q", "p" or a plain integer.
Rational parse_rational(const std::string& text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

double to_double(const Rational& value);

// n^e as an exact integer.
BigInt ipow(std::int64_t n, int e);

}  // namespace nervekit

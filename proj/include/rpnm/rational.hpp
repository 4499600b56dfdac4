#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace rpnm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact value of a finite double (every double is a dyadic rational).
Rational exact_rational(double x);

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

// Parses "p", "p/q" or a decimal literal such as "-0.25" exactly.
Rational parse_rational(const std::string& text);

double to_double(const Rational& r);

inline Rational rational(long long num, long long den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

}  // namespace rpnm

#include "rpnm/rational.hpp"

#include "rpnm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace rpnm {

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw ParameterError("exact_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num(scaled);
  BigInt den(1);
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return Rational(num, den);
}

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

BigInt parse_integer(const std::string& text) {
  if (text.empty()) throw ParameterError("empty integer literal");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw ParameterError("bad integer literal '" + text + "'");
  for (std::size_t k = i; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9') throw ParameterError("bad integer literal '" + text + "'");
  }
  // Leading zeros would make the string constructor read octal.
  const std::size_t first = std::min(text.find_first_not_of('0', i), text.size() - 1);
  BigInt v(text.substr(first));
  return text[0] == '-' ? BigInt(-v) : v;
}

BigInt pow10(int e) {
  BigInt p = 1;
  for (int i = 0; i < e; ++i) p *= 10;
  return p;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const BigInt num = parse_integer(text.substr(0, slash));
    const BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParameterError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  std::string mantissa = text;
  int exp10 = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    exp10 = static_cast<int>(parse_integer(text.substr(e + 1)).convert_to<long long>());
  }
  std::string digits = mantissa;
  if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exp10 -= static_cast<int>(mantissa.size() - dot - 1);
  }
  if (digits == "-" || digits == "+" || digits.empty()) throw ParameterError("bad number '" + text + "'");
  const BigInt num = parse_integer(digits);
  if (exp10 >= 0) return Rational(num * pow10(exp10));
  return Rational(num, pow10(-exp10));
}

}  // namespace rpnm

#include "rpnm/polynomial.hpp"

#include "rpnm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rpnm {

namespace {

int total_degree(const std::vector<int>& e) {
  int d = 0;
  for (int v : e) d += v;
  return d;
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Caller guarantees |v| < 2^126.
__int128 to_int128(const BigInt& v) {
  const BigInt mag = v < 0 ? BigInt(-v) : v;
  const BigInt mask = (BigInt(1) << 64) - 1;
  const auto lo = static_cast<unsigned long long>(BigInt(mag & mask));
  const auto hi = static_cast<unsigned long long>(BigInt(mag >> 64));
  const __int128 m = (static_cast<__int128>(hi) << 64) | static_cast<__int128>(lo);
  return v < 0 ? -m : m;
}

}  // namespace

Polynomial::Polynomial(int variables, std::vector<Monomial> terms) : variables_(variables) {
  if (variables < 1) throw ParameterError("polynomial needs at least one variable");
  std::map<std::vector<int>, Rational> merged;
  for (auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) != variables) {
      throw ParameterError("monomial exponent tuple has wrong length");
    }
    for (int e : t.exponents) {
      if (e < 0) throw ParameterError("negative exponent in monomial");
    }
    merged[t.exponents] += t.coefficient;
  }
  for (auto& [e, c] : merged) {
    if (c == 0) continue;
    degree_ = std::max(degree_, total_degree(e));
    terms_.push_back({e, c});
    coefficients_.push_back(to_double(c));
  }
}

double Polynomial::evaluate(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    double m = coefficients_[t];
    for (int i = 0; i < variables_; ++i) m *= ipow(x[i], terms_[t].exponents[i]);
    sum += m;
  }
  return sum;
}

Jet Polynomial::jet(const Vec& x) const {
  const int n = variables_;
  Jet j{0.0, Vec::Zero(n), Mat::Zero(n, n)};
  std::vector<double> p(n), dp(n), ddp(n);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& e = terms_[t].exponents;
    for (int i = 0; i < n; ++i) {
      p[i] = ipow(x[i], e[i]);
      dp[i] = e[i] >= 1 ? e[i] * ipow(x[i], e[i] - 1) : 0.0;
      ddp[i] = e[i] >= 2 ? e[i] * (e[i] - 1) * ipow(x[i], e[i] - 2) : 0.0;
    }
    const double c = coefficients_[t];
    double value = c;
    for (int i = 0; i < n; ++i) value *= p[i];
    j.value += value;
    for (int i = 0; i < n; ++i) {
      double gi = c * dp[i];
      for (int k = 0; k < n; ++k) if (k != i) gi *= p[k];
      j.gradient[i] += gi;
      for (int l = i; l < n; ++l) {
        double h = c;
        for (int k = 0; k < n; ++k) {
          if (k == i && k == l) h *= ddp[k];
          else if (k == i || k == l) h *= dp[k];
          else h *= p[k];
        }
        j.hessian(i, l) += h;
        if (l != i) j.hessian(l, i) += h;
      }
    }
  }
  return j;
}

Rational Polynomial::evaluate_exact(std::span<const Rational> x) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational m = t.coefficient;
    for (int i = 0; i < variables_; ++i) {
      for (int k = 0; k < t.exponents[i]; ++k) m *= x[i];
    }
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::scaled(const Rational& factor) const {
  std::vector<Monomial> t = terms_;
  for (auto& m : t) m.coefficient *= factor;
  return Polynomial(variables_, std::move(t));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.variables_ == 0) return b;
  if (b.variables_ == 0) return a;
  if (a.variables_ != b.variables_) throw ParameterError("adding polynomials in different variables");
  std::vector<Monomial> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(a.variables_, std::move(t));
}

ScaledPolynomial::ScaledPolynomial(const Polynomial& p)
    : variables_(p.variables()), scale_degree_(std::max(p.degree(), 1)), lcm_(1) {
  for (const auto& t : p.terms()) lcm_ = lcm(lcm_, boost::multiprecision::denominator(t.coefficient));
  for (const auto& t : p.terms()) {
    exponents_.push_back(t.exponents);
    total_degree_.push_back(total_degree(t.exponents));
    const Rational scaled = t.coefficient * Rational(lcm_);
    integer_coeff_.push_back(boost::multiprecision::numerator(scaled));
  }
}

ScaledPolynomial::Layer ScaledPolynomial::layer(long long q, long long max_abs_a) const {
  if (q < 1) throw ParameterError("denominator q must be positive");
  Layer L;
  L.owner_ = this;
  const BigInt bq(q);
  L.big_modulus_ = lcm_;
  for (int i = 1; i < scale_degree_; ++i) L.big_modulus_ *= bq;
  // A priori bound on |N| over the box, in long double.
  long double bound = 0.0L;
  for (std::size_t t = 0; t < integer_coeff_.size(); ++t) {
    BigInt c = integer_coeff_[t];
    for (int i = total_degree_[t]; i < scale_degree_; ++i) c *= bq;
    L.big_coeff_.push_back(c);
    const long double mag = std::fabs(c.convert_to<long double>());
    bound += mag * std::pow(static_cast<long double>(std::max(max_abs_a, 1LL)), total_degree_[t]);
  }
  bound += L.big_modulus_.convert_to<long double>();
  L.fast_ = bound < std::ldexp(1.0L, 120);
  if (L.fast_) {
    for (const auto& c : L.big_coeff_) L.coeff_.push_back(to_int128(c));
    L.modulus_ = to_int128(L.big_modulus_);
  }
  return L;
}

void ScaledPolynomial::Layer::distance_fast(std::span<const long long> a, __int128& k, __int128& m) const {
  const auto& P = *owner_;
  __int128 sum = 0;
  for (std::size_t t = 0; t < coeff_.size(); ++t) {
    __int128 term = coeff_[t];
    const auto& e = P.exponents_[t];
    for (int i = 0; i < P.variables_; ++i) {
      for (int r = 0; r < e[i]; ++r) term *= a[i];
    }
    sum += term;
  }
  __int128 rem = sum % modulus_;
  if (rem < 0) rem += modulus_;
  k = std::min(rem, modulus_ - rem);
  m = modulus_;
}

ExactDistance ScaledPolynomial::Layer::distance_exact(std::span<const long long> a) const {
  const auto& P = *owner_;
  BigInt sum = 0;
  for (std::size_t t = 0; t < big_coeff_.size(); ++t) {
    BigInt term = big_coeff_[t];
    const auto& e = P.exponents_[t];
    for (int i = 0; i < P.variables_; ++i) {
      for (int r = 0; r < e[i]; ++r) term *= a[i];
    }
    sum += term;
  }
  BigInt rem = sum % big_modulus_;
  if (rem < 0) rem += big_modulus_;
  const BigInt other = big_modulus_ - rem;
  return {rem < other ? rem : other, big_modulus_};
}

bool ScaledPolynomial::Layer::is_integer(std::span<const long long> a) const {
  if (fast_) {
    __int128 k = 0, m = 1;
    distance_fast(a, k, m);
    return k == 0;
  }
  return distance_exact(a).numerator == 0;
}

}  // namespace rpnm

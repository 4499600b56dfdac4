#pragma once

#include "rpnm/linalg.hpp"
#include "rpnm/rational.hpp"

#include <span>
#include <vector>

namespace rpnm {

struct Monomial {
  std::vector<int> exponents;
  Rational coefficient;
};

// Multivariate polynomial with exact rational coefficients. The double
// evaluators use the coefficients rounded once at construction.
class Polynomial {
 public:
  Polynomial() = default;
  // Like terms are merged and zero terms dropped.
  Polynomial(int variables, std::vector<Monomial> terms);

  int variables() const { return variables_; }
  int degree() const { return degree_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double evaluate(std::span<const double> x) const;
  Jet jet(const Vec& x) const;
  Rational evaluate_exact(std::span<const Rational> x) const;

  Polynomial scaled(const Rational& factor) const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);

 private:
  int variables_ = 0;
  int degree_ = 0;
  std::vector<Monomial> terms_;
  std::vector<double> coefficients_;  // rounded copies of terms_[i].coefficient
};

// Exact nearest-integer distance ||t|| = numerator / denominator.
struct ExactDistance {
  BigInt numerator;
  BigInt denominator;
};

// Integer form of q * P(a/q) for integer a and q:
//   q * P(a/q) = N(a, q) / (L * q^(D-1)),
// where L is the lcm of the coefficient denominators, D = max(degree, 1) and
// N(a, q) = sum_alpha (L c_alpha) a^alpha q^(D-|alpha|) is an integer.
class ScaledPolynomial {
 public:
  explicit ScaledPolynomial(const Polynomial& p);

  // Per-denominator evaluator. Uses 128-bit arithmetic when the a priori bound
  // on |N| over the box |a_i| <= max_abs_a fits, multiprecision otherwise.
  class Layer {
   public:
    // Distance of q * P(a/q) to the nearest integer as k / M in lowest
    // common scale (not reduced). fast_k/fast_m are valid when fast() holds.
    bool fast() const { return fast_; }
    void distance_fast(std::span<const long long> a, __int128& k, __int128& m) const;
    ExactDistance distance_exact(std::span<const long long> a) const;
    // True iff q * P(a/q) is an integer.
    bool is_integer(std::span<const long long> a) const;

   private:
    friend class ScaledPolynomial;
    const ScaledPolynomial* owner_ = nullptr;
    bool fast_ = false;
    std::vector<__int128> coeff_;
    __int128 modulus_ = 1;
    std::vector<BigInt> big_coeff_;
    BigInt big_modulus_;
  };

  Layer layer(long long q, long long max_abs_a) const;

  const BigInt& lcm_denominator() const { return lcm_; }
  int scale_degree() const { return scale_degree_; }

 private:
  int variables_ = 0;
  int scale_degree_ = 1;
  BigInt lcm_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> total_degree_;
  std::vector<BigInt> integer_coeff_;  // L * c_alpha
};

}  // namespace rpnm

#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace rpnm {

enum class TrigKind { selberg_plus, selberg_minus, fejer, general };

// Real-valued trigonometric polynomial sum_{|j| <= J} c(j) e(j theta) on R/Z,
// with e(t) = exp(2 pi i t). Coefficients are stored for j = -J..J.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(int degree, std::vector<std::complex<double>> coefficients, TrigKind kind);

  int degree() const { return degree_; }
  TrigKind kind() const { return kind_; }
  std::complex<double> coefficient(int j) const;
  const std::vector<std::complex<double>>& coefficients() const { return coeff_; }

  // Direct sum. Throws ConsistencyError if the imaginary residue exceeds 1e-9.
  double evaluate(double theta) const;
  // Horner evaluation in z = e(theta), used to cross-check evaluate.
  std::complex<double> evaluate_horner(double theta) const;

 private:
  int degree_ = 0;
  std::vector<std::complex<double>> coeff_{std::complex<double>(0.0, 0.0)};
  TrigKind kind_ = TrigKind::general;
};

struct SelbergPair {
  TrigPolynomial minorant;
  TrigPolynomial majorant;
  double alpha = 0.0;
  double beta = 0.0;
};

// Beurling-Selberg minorant/majorant of the indicator of the arc (alpha, beta)
// built from Vaaler's approximation of the sawtooth plus Fejer corrections.
SelbergPair selberg_pair(double alpha, double beta, int J);

struct SelbergCheck {
  bool sandwich = true;           // minorant <= indicator <= majorant on the grid
  double worst_violation = 0.0;
  bool mean_values = true;        // zero coefficients are (beta - alpha) -+ 1/(J+1)
  bool coefficient_bound = true;  // |c(j)| <= 1/(J+1) + min(beta - alpha, 1/(pi |j|))
};

// Checks the three defining properties; the sandwich is tested with tolerance
// 1e-10 at the grid points k/grid farther than 1e-6 from alpha and beta.
SelbergCheck check_selberg(const SelbergPair& pair, int grid);

// Indicator of the arc (alpha, beta) of R/Z (open at both ends).
double arc_indicator(double alpha, double beta, double theta);

// Vaaler's polynomial V_J approximating the sawtooth psi(x) = x - floor(x) - 1/2.
double vaaler_polynomial(int J, double x);
double sawtooth(double x);

TrigPolynomial fejer(int D);
// (sin(pi D theta) / (D sin(pi theta)))^2 with the value 1 at integers.
double fejer_closed_form(int D, double theta);

// Distance to the nearest integer.
double nearest_integer_distance(double t);

// True iff F_D(theta) >= 4/pi^2 (up to 1e-12) for every grid point k/grid with
// ||theta|| <= delta_star and at theta = delta_star, where D = floor(1/(2 delta_star)).
bool fejer_minorant_check(double delta_star, int grid);

double evaluate(const TrigPolynomial& p, double theta);

}  // namespace rpnm

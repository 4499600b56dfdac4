#include "rpnm/trig.hpp"

#include "rpnm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rpnm {

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> unit(double t) { return std::polar(1.0, 2.0 * kPi * t); }

}  // namespace

TrigPolynomial::TrigPolynomial(int degree, std::vector<std::complex<double>> coefficients, TrigKind kind)
    : degree_(degree), coeff_(std::move(coefficients)), kind_(kind) {
  if (degree < 0) throw ParameterError("trigonometric degree must be nonnegative");
  if (static_cast<int>(coeff_.size()) != 2 * degree + 1) {
    throw ParameterError("need 2J+1 coefficients");
  }
}

std::complex<double> TrigPolynomial::coefficient(int j) const {
  if (j < -degree_ || j > degree_) return {0.0, 0.0};
  return coeff_[j + degree_];
}

double TrigPolynomial::evaluate(double theta) const {
  std::complex<double> sum = coeff_[degree_];
  for (int j = 1; j <= degree_; ++j) {
    sum += coeff_[degree_ + j] * unit(j * theta) + coeff_[degree_ - j] * unit(-j * theta);
  }
  if (std::fabs(sum.imag()) > 1e-9) {
    throw ConsistencyError("trigonometric polynomial is not real-valued");
  }
  return sum.real();
}

std::complex<double> TrigPolynomial::evaluate_horner(double theta) const {
  const std::complex<double> z = unit(theta);
  std::complex<double> acc = 0.0;
  for (int k = 2 * degree_; k >= 0; --k) acc = acc * z + coeff_[k];
  return acc * unit(-degree_ * theta);
}

double sawtooth(double x) { return x - std::floor(x) - 0.5; }

double vaaler_polynomial(int J, double x) {
  double sum = 0.0;
  for (int j = 1; j <= J; ++j) {
    const double u = static_cast<double>(j) / (J + 1);
    const double v = -((1.0 - u) / std::tan(kPi * u) + 1.0 / kPi) / (J + 1);
    sum += v * std::sin(2.0 * kPi * j * x);
  }
  return sum;
}

double arc_indicator(double alpha, double beta, double theta) {
  const double t = theta - alpha - std::floor(theta - alpha);
  return (t > 0.0 && t < beta - alpha) ? 1.0 : 0.0;
}

SelbergPair selberg_pair(double alpha, double beta, int J) {
  if (J < 1) throw ParameterError("Selberg degree J must be positive");
  const double len = beta - alpha;
  if (!(len > 0.0 && len < 1.0)) throw ParameterError("need 0 < beta - alpha < 1");

  // Indicator = len + psi(alpha - x) + psi(x - beta). Replace psi by Vaaler's
  // V_J and absorb |psi - V_J| <= Delta_{J+1} / (2J+2) with Fejer terms
  // centred at alpha and beta.
  std::vector<std::complex<double>> plus(2 * J + 1), minus(2 * J + 1);
  const double corr0 = 1.0 / (J + 1);
  plus[J] = len + corr0;
  minus[J] = len - corr0;
  const std::complex<double> i_unit(0.0, 1.0);
  for (int j = 1; j <= J; ++j) {
    const double u = static_cast<double>(j) / (J + 1);
    const double v = -((1.0 - u) / std::tan(kPi * u) + 1.0 / kPi) / (J + 1);
    const std::complex<double> g = v / (2.0 * i_unit);  // coefficient of e(jx) in V_J
    const double fejer_w = (1.0 - u) / (2.0 * (J + 1));
    for (int sign : {1, -1}) {
      const int k = sign * j;
      const std::complex<double> gk = sign > 0 ? g : -g;
      const std::complex<double> ea = unit(-k * alpha);
      const std::complex<double> eb = unit(-k * beta);
      const std::complex<double> base = gk * (eb - ea);
      const std::complex<double> corr = fejer_w * (ea + eb);
      plus[J + k] = base + corr;
      minus[J + k] = base - corr;
    }
  }
  return {TrigPolynomial(J, std::move(minus), TrigKind::selberg_minus),
          TrigPolynomial(J, std::move(plus), TrigKind::selberg_plus), alpha, beta};
}

TrigPolynomial fejer(int D) {
  if (D < 1) throw ParameterError("Fejer degree must be positive");
  std::vector<std::complex<double>> c(2 * D + 1);
  for (int d = -D; d <= D; ++d) {
    c[d + D] = static_cast<double>(D - std::abs(d)) / (static_cast<double>(D) * D);
  }
  return TrigPolynomial(D, std::move(c), TrigKind::fejer);
}

double fejer_closed_form(int D, double theta) {
  const double s = std::sin(kPi * theta);
  if (std::fabs(s) < 1e-300 || nearest_integer_distance(theta) == 0.0) return 1.0;
  const double r = std::sin(kPi * D * theta) / (D * s);
  return r * r;
}

double nearest_integer_distance(double t) {
  const double d = std::fabs(t - std::nearbyint(t));
  return d > 0.5 ? 0.5 : d;
}

bool fejer_minorant_check(double delta_star, int grid) {
  if (!(delta_star > 0.0 && delta_star < 0.5)) throw ParameterError("delta_star must lie in (0, 1/2)");
  if (grid < 1) throw ParameterError("grid must be positive");
  const int D = static_cast<int>(std::floor(1.0 / (2.0 * delta_star)));
  if (D < 1) throw ParameterError("Fejer degree floor(1/(2 delta_star)) must be at least 1");
  const TrigPolynomial F = fejer(D);
  const double floor_value = 4.0 / (kPi * kPi) - 1e-12;
  for (int k = 0; k < grid; ++k) {
    const double theta = static_cast<double>(k) / grid;
    if (nearest_integer_distance(theta) > delta_star) continue;
    if (F.evaluate(theta) < floor_value) return false;
  }
  return F.evaluate(delta_star) >= floor_value && F.evaluate(-delta_star) >= floor_value;
}

double evaluate(const TrigPolynomial& p, double theta) { return p.evaluate(theta); }

SelbergCheck check_selberg(const SelbergPair& pair, int grid) {
  if (grid < 1) throw ParameterError("grid must be positive");
  SelbergCheck out;
  const double len = pair.beta - pair.alpha;
  const int J = std::max(pair.minorant.degree(), pair.majorant.degree());
  for (int k = 0; k < grid; ++k) {
    const double theta = static_cast<double>(k) / grid;
    if (nearest_integer_distance(theta - pair.alpha) <= 1e-6 ||
        nearest_integer_distance(theta - pair.beta) <= 1e-6) {
      continue;
    }
    const double ind = arc_indicator(pair.alpha, pair.beta, theta);
    const double lo = pair.minorant.evaluate(theta) - ind;
    const double hi = ind - pair.majorant.evaluate(theta);
    out.worst_violation = std::max({out.worst_violation, lo, hi});
  }
  out.sandwich = out.worst_violation <= 1e-10;
  const double inv = 1.0 / (J + 1);
  out.mean_values = std::abs(pair.majorant.coefficient(0) - (len + inv)) <= 1e-14 &&
                    std::abs(pair.minorant.coefficient(0) - (len - inv)) <= 1e-14;
  for (int j = 1; j <= J; ++j) {
    const double bound = inv + std::min(len, 1.0 / (std::numbers::pi * j)) + 1e-12;
    for (const TrigPolynomial* p : {&pair.minorant, &pair.majorant}) {
      if (std::abs(p->coefficient(j)) > bound || std::abs(p->coefficient(-j)) > bound) {
        out.coefficient_bound = false;
      }
    }
  }
  return out;
}

}  // namespace rpnm

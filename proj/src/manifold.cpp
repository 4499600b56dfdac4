#include "rpnm/manifold.hpp"

#include "rpnm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rpnm {

std::string to_string(Family f) {
  switch (f) {
    case Family::paraboloid: return "paraboloid";
    case Family::diag_quadric: return "diag-quadric";
    case Family::complex_squaring: return "complex-squaring";
    case Family::polynomial: return "polynomial";
  }
  return "unknown";
}

namespace {

std::vector<int> unit_exponent(int n, int i, int power) {
  std::vector<int> e(n, 0);
  e[i] = power;
  return e;
}

void validate(ManifoldSpec& spec) {
  if (spec.n < 2) throw ParameterError("manifold dimension n must be at least 2");
  if (spec.R < 1) throw ParameterError("codimension R must be at least 1");
  if (!(spec.eps0 > 0.0) || !std::isfinite(spec.eps0)) throw ParameterError("eps0 must be positive");
  if (spec.x0.size() != spec.n) throw ParameterError("x0 must have n coordinates");
  if (spec.R > radon_hurwitz(spec.n)) {
    spec.warnings.push_back("R = " + std::to_string(spec.R) + " exceeds RH(" + std::to_string(spec.n) +
                            ") = " + std::to_string(radon_hurwitz(spec.n)) +
                            "; the curvature condition is expected to fail");
  }
  if (spec.exact_polys) {
    if (static_cast<int>(spec.exact_polys->size()) != spec.R) {
      throw ParameterError("need exactly R polynomials");
    }
    for (const auto& p : *spec.exact_polys) {
      if (p.variables() != spec.n) throw ParameterError("polynomial has wrong number of variables");
    }
    const double gap = exact_float_discrepancy(spec, 100);
    if (gap > 1e-12) {
      throw ConsistencyError("exact and floating evaluators disagree by " + std::to_string(gap));
    }
  }
}

}  // namespace

ManifoldSpec make_paraboloid(int n, Vec x0, double eps0) {
  ManifoldSpec spec;
  spec.n = n;
  spec.R = 1;
  spec.x0 = std::move(x0);
  spec.eps0 = eps0;
  spec.family = Family::paraboloid;
  if (n >= 1) {
    std::vector<Monomial> terms;
    for (int i = 0; i < n; ++i) terms.push_back({unit_exponent(n, i, 2), rational(1, 2)});
    spec.exact_polys = std::vector<Polynomial>{Polynomial(n, terms)};
  }
  validate(spec);
  return spec;
}

ManifoldSpec make_diag_quadric(std::vector<Rational> c, Vec x0, double eps0) {
  ManifoldSpec spec;
  spec.n = static_cast<int>(c.size());
  spec.R = 1;
  spec.x0 = std::move(x0);
  spec.eps0 = eps0;
  spec.family = Family::diag_quadric;
  for (const auto& ci : c) {
    if (ci == 0) throw ParameterError("diag-quadric coefficients must be nonzero");
  }
  spec.diag = c;
  if (spec.n >= 1) {
    std::vector<Monomial> terms;
    for (int i = 0; i < spec.n; ++i) terms.push_back({unit_exponent(spec.n, i, 2), c[i] / 2});
    spec.exact_polys = std::vector<Polynomial>{Polynomial(spec.n, terms)};
  }
  validate(spec);
  return spec;
}

ManifoldSpec make_complex_squaring(Vec x0, double eps0) {
  ManifoldSpec spec;
  spec.n = 2;
  spec.R = 2;
  spec.x0 = std::move(x0);
  spec.eps0 = eps0;
  spec.family = Family::complex_squaring;
  spec.exact_polys = std::vector<Polynomial>{
      Polynomial(2, {{{2, 0}, rational(1, 2)}, {{0, 2}, rational(-1, 2)}}),
      Polynomial(2, {{{1, 1}, rational(1)}})};
  validate(spec);
  return spec;
}

ManifoldSpec make_polynomial_manifold(int n, std::vector<Polynomial> f, Vec x0, double eps0) {
  ManifoldSpec spec;
  spec.n = n;
  spec.R = static_cast<int>(f.size());
  spec.x0 = std::move(x0);
  spec.eps0 = eps0;
  spec.family = Family::polynomial;
  spec.exact_polys = std::move(f);
  validate(spec);
  return spec;
}

bool in_evaluation_domain(const ManifoldSpec& spec, const Vec& x) {
  return x.size() == spec.n && sup_norm(x - spec.x0) < kEvaluationRadiusFactor * spec.eps0;
}

namespace {

Jet evaluate_unchecked(const ManifoldSpec& spec, int r, const Vec& x) {
  const int n = spec.n;
  switch (spec.family) {
    case Family::paraboloid:
      return {0.5 * x.squaredNorm(), x, Mat::Identity(n, n)};
    case Family::diag_quadric: {
      Vec c(n);
      for (int i = 0; i < n; ++i) c[i] = to_double(spec.diag[i]);
      return {0.5 * (c.array() * x.array().square()).sum(), c.cwiseProduct(x), Mat(c.asDiagonal())};
    }
    case Family::complex_squaring: {
      if (r == 1) {
        Mat h(2, 2);
        h << 1.0, 0.0, 0.0, -1.0;
        return {0.5 * (x[0] * x[0] - x[1] * x[1]), Vec{{x[0], -x[1]}}, h};
      }
      Mat h(2, 2);
      h << 0.0, 1.0, 1.0, 0.0;
      return {x[0] * x[1], Vec{{x[1], x[0]}}, h};
    }
    case Family::polynomial:
      return (*spec.exact_polys)[r - 1].jet(x);
  }
  throw ParameterError("unknown manifold family");
}

}  // namespace

Jet evaluate(const ManifoldSpec& spec, int r, const Vec& x) {
  if (r < 1 || r > spec.R) throw IndexError("codimension index out of range");
  if (!in_evaluation_domain(spec, x)) throw DomainError("evaluation point outside B_{4 eps0}(x0)");
  return evaluate_unchecked(spec, r, x);
}

Jet evaluate_combination(const ManifoldSpec& spec, std::span<const double> coeff, const Vec& x) {
  if (static_cast<int>(coeff.size()) != spec.R) throw IndexError("need R coefficients");
  if (!in_evaluation_domain(spec, x)) throw DomainError("evaluation point outside B_{4 eps0}(x0)");
  Jet out{0.0, Vec::Zero(spec.n), Mat::Zero(spec.n, spec.n)};
  for (int r = 1; r <= spec.R; ++r) {
    const double c = coeff[r - 1];
    if (c == 0.0) continue;
    const Jet j = evaluate_unchecked(spec, r, x);
    out.value += c * j.value;
    out.gradient += c * j.gradient;
    out.hessian += c * j.hessian;
  }
  return out;
}

double exact_float_discrepancy(const ManifoldSpec& spec, int samples) {
  if (!spec.exact_polys) return 0.0;
  double worst = 0.0;
  for (const Vec& x : ball_grid(spec.x0, spec.eps0, samples)) {
    std::vector<Rational> xq;
    for (int i = 0; i < spec.n; ++i) xq.push_back(exact_rational(x[i]));
    for (int r = 1; r <= spec.R; ++r) {
      const double exact = to_double((*spec.exact_polys)[r - 1].evaluate_exact(xq));
      const double fl = evaluate_unchecked(spec, r, x).value;
      worst = std::max(worst, std::fabs(exact - fl) / std::max(1.0, std::fabs(exact)));
    }
  }
  return worst;
}

std::vector<Vec> sphere_samples(int R, int count) {
  if (R < 1) throw ParameterError("sphere dimension must be positive");
  count = std::max(count, 1);
  std::vector<Vec> out;
  if (R == 1) {
    out.push_back(Vec::Ones(1));
    return out;
  }
  if (R == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      out.push_back(Vec{{std::cos(a), std::sin(a)}});
    }
    return out;
  }
  // Hyperspherical angles: R-2 polar angles in [0, pi], one azimuth in [0, 2 pi).
  const int m = std::max(2, static_cast<int>(std::ceil(std::pow(count, 1.0 / (R - 1)))));
  std::vector<int> idx(R - 1, 0);
  while (true) {
    Vec t(R);
    double sin_prod = 1.0;
    for (int k = 0; k < R - 2; ++k) {
      const double a = std::numbers::pi * idx[k] / (m - 1);
      t[k] = sin_prod * std::cos(a);
      sin_prod *= std::sin(a);
    }
    const double az = 2.0 * std::numbers::pi * idx[R - 2] / m;
    t[R - 2] = sin_prod * std::cos(az);
    t[R - 1] = sin_prod * std::sin(az);
    out.push_back(t / t.norm());
    int k = 0;
    while (k < R - 1 && ++idx[k] == m) idx[k++] = 0;
    if (k == R - 1) break;
  }
  return out;
}

std::vector<Vec> ball_grid(const Vec& center, double radius, int count) {
  const int n = static_cast<int>(center.size());
  count = std::max(count, 1);
  int m = static_cast<int>(std::ceil(std::pow(static_cast<double>(count), 1.0 / n) - 1e-9));
  if (m <= 1) return {center};
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = center[i] - radius + 2.0 * radius * idx[i] / (m - 1);
    out.push_back(x);
    int k = 0;
    while (k < n && ++idx[k] == m) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

CurvatureReport check_curvature(const ManifoldSpec& spec, int t_samples, int x_samples) {
  if (t_samples < 1 || x_samples < 1) throw ParameterError("need at least one t and one x sample");
  const auto ts = sphere_samples(spec.R, t_samples);
  const auto xs = ball_grid(spec.x0, 2.0 * spec.eps0, x_samples);

  std::vector<std::vector<Mat>> hess(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (int r = 1; r <= spec.R; ++r) hess[i].push_back(evaluate(spec, r, xs[i]).hessian);
  }
  auto combo_det = [&](std::size_t i, const Vec& t) {
    Mat h = Mat::Zero(spec.n, spec.n);
    for (int r = 0; r < spec.R; ++r) h += t[r] * hess[i][r];
    return std::fabs(h.determinant());
  };

  CurvatureReport rep;
  rep.samples_t = static_cast<int>(ts.size());
  rep.samples_x = static_cast<int>(xs.size());
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (const Vec& t : ts) {
      const double d = combo_det(i, t);
      rep.min_abs_det = std::min(rep.min_abs_det, d);
      rep.max_abs_det = std::max(rep.max_abs_det, d);
    }
  }
  rep.admissible = rep.min_abs_det > 1e-12;

  // Uniform bound over f_s + sum_{r != s} t_r f_r, t in [-2, 2]^{R-1}.
  double worst = std::max(rep.max_abs_det, rep.admissible ? 1.0 / rep.min_abs_det
                                                           : std::numeric_limits<double>::infinity());
  if (spec.R > 1 && rep.admissible) {
    const int m = std::max(5, static_cast<int>(std::ceil(std::pow(t_samples, 1.0 / (spec.R - 1)))));
    for (int s = 0; s < spec.R; ++s) {
      std::vector<int> idx(spec.R - 1, 0);
      while (true) {
        Vec t(spec.R);
        int k = 0;
        for (int r = 0; r < spec.R; ++r) {
          t[r] = (r == s) ? 1.0 : -2.0 + 4.0 * idx[k++] / (m - 1);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double d = combo_det(i, t);
          worst = std::max({worst, d, d > 0 ? 1.0 / d : std::numeric_limits<double>::infinity()});
        }
        int c = 0;
        while (c < spec.R - 1 && ++idx[c] == m) idx[c++] = 0;
        if (c == spec.R - 1) break;
      }
    }
  }
  rep.frak_C0 = 1.01 * worst;
  return rep;
}

int radon_hurwitz(long long n) {
  if (n < 1) throw ParameterError("radon_hurwitz needs n >= 1");
  int b = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++b;
  }
  const int n2 = b / 4;
  const int n3 = b % 4;
  return 8 * n2 + (1 << n3);
}

PencilFunction::PencilFunction(const ManifoldSpec& spec, int s, std::vector<long long> j,
                               std::vector<int> gamma)
    : spec_(spec), s_(s), j_(std::move(j)), gamma_(std::move(gamma)) {
  if (s_ < 1 || s_ > spec_.R) throw IndexError("pencil codimension index out of range");
  if (static_cast<int>(j_.size()) != spec_.R) throw IndexError("pencil index needs R entries");
  if (gamma_.empty()) gamma_.assign(spec_.R, 1);
  if (static_cast<int>(gamma_.size()) != spec_.R) throw IndexError("sign vector needs R entries");
  for (int g : gamma_) {
    if (g != 1 && g != -1) throw IndexError("sign vector entries must be +1 or -1");
  }
  const long long js = j_[s_ - 1];
  if (js == 0) throw IndexError("pencil index has j_s = 0");
  long long sup = 0;
  for (long long v : j_) sup = std::max(sup, v < 0 ? -v : v);
  if (!(sup > 0 && sup <= 2 * js)) throw IndexError("pencil index outside the big pencil set J^s_b");
  for (int r = 0; r < spec_.R; ++r) {
    const Rational c = (r == s_ - 1) ? Rational(gamma_[r]) : Rational(gamma_[r]) * rational(j_[r], js);
    coeff_exact_.push_back(c);
    coeff_.push_back(to_double(c));
  }
}

Jet PencilFunction::jet(const Vec& x) const { return evaluate_combination(spec_, coeff_, x); }

double PencilFunction::value(const Vec& x) const { return evaluate_combination(spec_, coeff_, x).value; }

std::optional<Polynomial> PencilFunction::exact() const {
  if (!spec_.exact_polys) return std::nullopt;
  Polynomial sum;
  for (int r = 0; r < spec_.R; ++r) sum = sum + (*spec_.exact_polys)[r].scaled(coeff_exact_[r]);
  return sum;
}

PencilFunction pencil_function(const ManifoldSpec& spec, int s, std::vector<long long> j,
                               std::vector<int> gamma) {
  return PencilFunction(spec, s, std::move(j), std::move(gamma));
}

}  // namespace rpnm

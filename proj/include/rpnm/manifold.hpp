#pragma once

#include "rpnm/linalg.hpp"
#include "rpnm/polynomial.hpp"
#include "rpnm/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rpnm {

enum class Family { paraboloid, diag_quadric, complex_squaring, polynomial };

std::string to_string(Family f);

// Graph manifold M = {(x, f_1(x), ..., f_R(x)) : x in closed B_eps0(x0)}.
// Balls are sup-norm balls throughout. Immutable after construction.
struct ManifoldSpec {
  int n = 0;
  int R = 0;
  Vec x0;
  double eps0 = 0.0;
  Family family = Family::paraboloid;
  std::vector<Rational> diag;                      // diag-quadric coefficients c_i
  std::optional<std::vector<Polynomial>> exact_polys;
  std::vector<std::string> warnings;               // e.g. R > RH(n)
};

ManifoldSpec make_paraboloid(int n, Vec x0, double eps0);
ManifoldSpec make_diag_quadric(std::vector<Rational> c, Vec x0, double eps0);
ManifoldSpec make_complex_squaring(Vec x0, double eps0);
ManifoldSpec make_polynomial_manifold(int n, std::vector<Polynomial> f, Vec x0, double eps0);

// f_r, grad f_r and H_{f_r} at x (r is 1-based). Rejects x outside B_{4 eps0}(x0).
Jet evaluate(const ManifoldSpec& spec, int r, const Vec& x);

// Same as evaluate but for the combination sum_r coeff_r f_r.
Jet evaluate_combination(const ManifoldSpec& spec, std::span<const double> coeff, const Vec& x);

// Largest |x_i - x0_i| / eps0 for which evaluation is allowed.
inline constexpr double kEvaluationRadiusFactor = 4.0;

bool in_evaluation_domain(const ManifoldSpec& spec, const Vec& x);

// Maximum deviation between exact and floating evaluation of the graph
// functions over a deterministic grid of `samples` points in B_eps0(x0).
double exact_float_discrepancy(const ManifoldSpec& spec, int samples);

struct CurvatureReport {
  double min_abs_det = 0.0;
  double max_abs_det = 0.0;
  double frak_C0 = 0.0;
  int samples_t = 0;
  int samples_x = 0;
  bool admissible = false;
};

// Samples |det H_{t.f}(x)| over t on the unit sphere of R^R and x in the
// closed ball B_{2 eps0}(x0). Since det H_{lambda t.f} = lambda^n det H_{t.f},
// the unit sphere carries all the information of the condition for t != 0.
CurvatureReport check_curvature(const ManifoldSpec& spec, int t_samples, int x_samples);

// Deterministic point sets used by check_curvature.
std::vector<Vec> sphere_samples(int R, int count);
std::vector<Vec> ball_grid(const Vec& center, double radius, int count);

int radon_hurwitz(long long n);

// F_{s,j,gamma} = gamma_s f_s + sum_{r != s} gamma_r (j_r / j_s) f_r.
class PencilFunction : public SmoothFunction {
 public:
  PencilFunction(const ManifoldSpec& spec, int s, std::vector<long long> j, std::vector<int> gamma);

  int dimension() const override { return spec_.n; }
  Jet jet(const Vec& x) const override;
  double value(const Vec& x) const override;

  int s() const { return s_; }
  const std::vector<long long>& j() const { return j_; }
  const std::vector<int>& gamma() const { return gamma_; }
  const std::vector<Rational>& coefficients() const { return coeff_exact_; }
  const ManifoldSpec& spec() const { return spec_; }
  // Exact polynomial form when the manifold has one.
  std::optional<Polynomial> exact() const;

 private:
  ManifoldSpec spec_;
  int s_;
  std::vector<long long> j_;
  std::vector<int> gamma_;
  std::vector<Rational> coeff_exact_;
  std::vector<double> coeff_;
};

PencilFunction pencil_function(const ManifoldSpec& spec, int s, std::vector<long long> j,
                               std::vector<int> gamma);

}  // namespace rpnm

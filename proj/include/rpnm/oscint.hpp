#pragma once

#include "rpnm/legendre.hpp"
#include "rpnm/linalg.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace rpnm {

using Complex = std::complex<double>;

// e(t) = exp(2 pi i t).
Complex e(double t);

// I(lambda) = integral of amplitude(v) e(lambda phase(v)) dv over the box
// carrying the support of the amplitude.
class OscIntegral {
 public:
  OscIntegral(std::shared_ptr<const SmoothFunction> phase, std::function<double(const Vec&)> amplitude,
              Box support, double lambda, std::optional<Vec> critical_point = std::nullopt);

  int dimension() const { return static_cast<int>(support_.lo.size()); }
  const SmoothFunction& phase() const { return *phase_; }
  double amplitude(const Vec& v) const { return amplitude_(v); }
  const Box& support() const { return support_; }
  double lambda() const { return lambda_; }
  const std::optional<Vec>& critical_point() const { return critical_point_; }

  OscIntegral with_lambda(double lambda) const;

 private:
  std::shared_ptr<const SmoothFunction> phase_;
  std::function<double(const Vec&)> amplitude_;
  Box support_;
  double lambda_;
  std::optional<Vec> critical_point_;
};

struct QuadratureOptions {
  double tol = 1e-9;              // absolute change between successive levels
  int nodes_per_panel = 16;       // Gauss-Legendre points per panel and axis
  long long max_panels = 1 << 20; // cap on the total number of panels
  unsigned shards = 1;
};

struct QuadratureResult {
  Complex value;
  double error_estimate = 0.0;
  long long panels_per_axis = 0;
  int levels = 0;
};

// Tensor Gauss-Legendre quadrature with the panel count per axis doubling from
// max(64, 8 ceil(lambda)^(1/d)) until successive values agree to opts.tol, for
// at most `refinement` doublings. Throws QuadratureError when it does not settle.
QuadratureResult evaluate(const OscIntegral& integral, int refinement = 8, const QuadratureOptions& opts = {});

struct CriticalPointData {
  double Delta = 0.0;  // |det H(v0)|
  int sigma = 0;       // signature of H(v0)
};

CriticalPointData critical_point_data(const OscIntegral& integral);

// lambda^{-d/2} Delta^{-1/2} e(lambda phase(v0) + sigma/8) amplitude(v0).
Complex stationary_phase_prediction(const OscIntegral& integral);

enum class DecayKind { stationary, nonstationary };

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> lambdas;
  std::vector<double> magnitudes;  // |I| or |I - prediction|
  std::vector<double> predictions; // |prediction| (stationary only)
  int used_points = 0;
};

// Least-squares slope of log|I| (nonstationary) or log|I - prediction|
// (stationary) against log lambda. Values below 1e-14 are dropped.
DecayFit decay_slope(DecayKind kind, const OscIntegral& family, const std::vector<double>& lambdas,
                     int refinement = 8, const QuadratureOptions& opts = {});

// Least-squares fit y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Geometric grid start, start*ratio, ... with `count` points.
std::vector<double> geometric_grid(double start, double ratio, int count);

// Built-in phases.
std::shared_ptr<const SmoothFunction> quadratic_phase(Mat H);       // 1/2 v^T H v
std::shared_ptr<const SmoothFunction> linear_phase(Vec direction);  // direction . v
std::shared_ptr<const SmoothFunction> zero_phase(int d);

// Tensor bump amplitude with value 1 at its center.
std::function<double(const Vec&)> bump_amplitude(const WeightFunction& w);

// I(q, j, k) = integral of e(q j_s (F(x) - k.x / j_s)) w(x) dx.
OscIntegral primal_integral(const DualFamily& fam, long long q, const std::vector<long long>& k);

// I*(d, j, k) = integral of w*(z) e(d j_s (F*(z) - k.z / j_s)) / sqrt|det H_F(preimage)| dz.
OscIntegral dual_integral(const DualFamily& fam, long long d, const std::vector<long long>& k);

}  // namespace rpnm

#pragma once

#include "rpnm/linalg.hpp"

#include <span>
#include <string>

namespace rpnm {

enum class WeightProfile {
  standard_bump,  // exp(1 - 1/(1 - t^2)) per axis, C-infinity
  cosine_taper,   // cos^8(pi t / 2) per axis, C^7 at the support boundary
};

std::string to_string(WeightProfile p);
WeightProfile parse_weight_profile(const std::string& name);

// Tensor-product bump w(x) = prod_i phi((x_i - c_i) / radius), with
// 0 <= w <= 1, w(center) = 1 and support the closed sup-norm ball of the
// given radius (w vanishes on its boundary).
class WeightFunction {
 public:
  WeightFunction(Vec center, double radius, WeightProfile profile = WeightProfile::standard_bump);

  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  WeightProfile profile() const { return profile_; }
  int dimension() const { return static_cast<int>(center_.size()); }

  double operator()(const Vec& x) const;
  double at(std::span<const double> x) const;
  // Profile value for a single scaled coordinate t in [-1, 1].
  double profile_value(double t) const;

  // Integral of w over R^n (the zero Fourier coefficient).
  double w_hat_zero() const { return w_hat_zero_; }

  // 1-D integral of the profile over [-1, 1] with the given number of
  // Gauss-Legendre panels; exposed for reproducibility checks.
  double profile_integral(int panels) const;

 private:
  Vec center_;
  double radius_;
  WeightProfile profile_;
  double w_hat_zero_ = 0.0;
};

// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace rpnm

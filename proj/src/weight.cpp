#include "rpnm/weight.hpp"

#include "rpnm/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace rpnm {

std::string to_string(WeightProfile p) {
  return p == WeightProfile::standard_bump ? "standard_bump" : "cosine_taper";
}

WeightProfile parse_weight_profile(const std::string& name) {
  if (name == "standard_bump" || name == "bump") return WeightProfile::standard_bump;
  if (name == "cosine_taper" || name == "cosine") return WeightProfile::cosine_taper;
  throw ParameterError("unknown weight profile '" + name + "'");
}

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    weights[i] = weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

WeightFunction::WeightFunction(Vec center, double radius, WeightProfile profile)
    : center_(std::move(center)), radius_(radius), profile_(profile) {
  if (!(radius_ > 0.0)) throw ParameterError("weight radius must be positive");
  if (center_.size() < 1) throw ParameterError("weight needs a center");
  const double one_d = profile_integral(256);
  w_hat_zero_ = std::pow(one_d * radius_, dimension());
}

double WeightFunction::profile_value(double t) const {
  if (!(std::fabs(t) < 1.0)) return 0.0;
  if (profile_ == WeightProfile::standard_bump) return std::exp(1.0 - 1.0 / (1.0 - t * t));
  const double c = std::cos(0.5 * std::numbers::pi * t);
  const double c2 = c * c;
  const double c4 = c2 * c2;
  return c4 * c4;
}

double WeightFunction::at(std::span<const double> x) const {
  double w = 1.0;
  for (int i = 0; i < dimension(); ++i) {
    w *= profile_value((x[i] - center_[i]) / radius_);
    if (w == 0.0) return 0.0;
  }
  return w;
}

double WeightFunction::operator()(const Vec& x) const {
  return at(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

double WeightFunction::profile_integral(int panels) const {
  std::vector<double> nodes, weights;
  gauss_legendre(16, nodes, weights);
  const double h = 2.0 / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = -1.0 + (p + 0.5) * h;
    double panel = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) panel += weights[k] * profile_value(mid + 0.5 * h * nodes[k]);
    sum += 0.5 * h * panel;
  }
  return sum;
}

}  // namespace rpnm

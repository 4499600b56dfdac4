#pragma once

#include <Eigen/Dense>

namespace rpnm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Value, gradient and Hessian of a scalar function at one point.
struct Jet {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

// Twice differentiable scalar function on (a subset of) R^d.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;

  virtual int dimension() const = 0;
  virtual Jet jet(const Vec& x) const = 0;
  virtual double value(const Vec& x) const { return jet(x).value; }
  virtual Vec gradient(const Vec& x) const { return jet(x).gradient; }
};

inline double sup_norm(const Vec& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace rpnm

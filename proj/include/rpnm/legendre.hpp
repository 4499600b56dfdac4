#pragma once

#include "rpnm/linalg.hpp"
#include "rpnm/manifold.hpp"
#include "rpnm/weight.hpp"

#include <functional>
#include <memory>

namespace rpnm {

inline constexpr double kDefaultInversionTolerance = 1e-10;
inline constexpr int kMaxNewtonIterations = 100;

// Solves grad F(x) = y by Newton's method from `start`, halving the step until
// the sup-norm residual decreases. Throws InversionError on failure.
Vec solve_gradient_equation(const SmoothFunction& F, const Vec& y, const Vec& start,
                            double tol = kDefaultInversionTolerance);

// F*(y) = y . x - F(x) with x = (grad F)^{-1}(y). The Hessian is H_F(x)^{-1}.
// `admissible` restricts the preimage; points failing it raise DomainError.
class LegendreConjugate : public SmoothFunction {
 public:
  LegendreConjugate(std::shared_ptr<const SmoothFunction> base, Vec start,
                    std::function<bool(const Vec&)> admissible = {},
                    double tol = kDefaultInversionTolerance);

  int dimension() const override { return base_->dimension(); }
  Jet jet(const Vec& y) const override;
  double value(const Vec& y) const override;
  Vec gradient(const Vec& y) const override { return preimage(y); }

  Vec preimage(const Vec& y) const;
  const SmoothFunction& base() const { return *base_; }

 private:
  std::shared_ptr<const SmoothFunction> base_;
  Vec start_;
  std::function<bool(const Vec&)> admissible_;
  double tol_;
};

struct Box {
  Vec lo;
  Vec hi;
  bool contains(const Vec& y) const;
};

// Bounding box of grad F over the closed sup-ball B(center, radius), from a
// grid of `per_axis`^n samples inflated by a Lipschitz margin from the Hessian.
Box gradient_image_box(const SmoothFunction& F, const Vec& center, double radius, int per_axis = 17);

// Legendre dual of a pencil function: F*, the dual weight w* = w o (grad F)^{-1}
// and the Hessian determinant at the preimage.
class DualFamily {
 public:
  DualFamily(PencilFunction F, WeightFunction w, double inv_tol = kDefaultInversionTolerance);

  const PencilFunction& function() const { return *F_; }
  const WeightFunction& weight() const { return w_; }
  double inv_tol() const { return inv_tol_; }
  std::shared_ptr<const SmoothFunction> primal() const { return F_; }
  std::shared_ptr<const LegendreConjugate> conjugate_function() const { return Fstar_; }

  // Preimage x in D = B_{2 eps0}(x0) with grad F(x) = y.
  Vec invert_gradient(const Vec& y) const;
  double conjugate(const Vec& y) const;
  Jet conjugate_jet(const Vec& y) const;
  // w((grad F)^{-1}(y)); zero when inversion fails or the preimage is outside supp w.
  double dual_weight(const Vec& y) const;
  double hessian_det_at_preimage(const Vec& y) const;

  // F**(x), computed by conjugating the numerically conjugated function.
  double biconjugate(const Vec& x) const;

  // Bounding box of R_j = grad F(D), enlarged by the Lipschitz margin.
  Box range_box() const;
  // Bounding box of V_j = grad F(supp w).
  Box support_box() const;

 private:
  std::shared_ptr<const PencilFunction> F_;
  WeightFunction w_;
  double inv_tol_;
  std::shared_ptr<const LegendreConjugate> Fstar_;
  std::shared_ptr<const LegendreConjugate> Fstarstar_;
};

struct LegendreResiduals {
  double involution = 0.0;          // max |F**(x) - F(x)|
  double inverse_hessian = 0.0;     // max |H_num(F*)(grad F(x)) H_F(x) - I|, central differences
  double gradient_inversion = 0.0;  // max |(grad F)^{-1}(grad F(x)) - x|
  int samples = 0;
};

// Identity residuals over a grid of about `samples` points of the closed
// ball B_eps0(x0). `h` is the central-difference step for the Hessian of F*.
LegendreResiduals legendre_residuals(const DualFamily& fam, int samples, double h = 1e-4);

}  // namespace rpnm

#include "rpnm/legendre.hpp"

#include "rpnm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rpnm {

Vec solve_gradient_equation(const SmoothFunction& F, const Vec& y, const Vec& start, double tol) {
  Vec x = start;
  Jet J;
  try {
    J = F.jet(x);
  } catch (const Error& e) {
    throw InversionError(std::string("cannot evaluate at the Newton start: ") + e.what());
  }
  Vec g = J.gradient - y;
  double res = sup_norm(g);
  auto try_step = [&](const Vec& trial) {
    try {
      Jet Jt = F.jet(trial);
      Vec gt = Jt.gradient - y;
      const double rt = sup_norm(gt);
      if (rt < res) {
        x = trial;
        J = std::move(Jt);
        g = std::move(gt);
        res = rt;
        return true;
      }
    } catch (const Error&) {
    }
    return false;
  };
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const Eigen::FullPivLU<Mat> lu(J.hessian);
    if (!lu.isInvertible()) {
      if (res <= tol) return x;
      throw InversionError("singular Hessian during gradient inversion");
    }
    const Vec step = lu.solve(g);
    if (res <= tol) {
      // One undamped step past the tolerance tightens x to rounding level.
      try_step(x - step);
      return x;
    }
    bool accepted = false;
    double t = 1.0;
    for (int half = 0; half < 40 && !accepted; ++half, t *= 0.5) accepted = try_step(x - t * step);
    if (!accepted) throw InversionError("damped Newton step failed to reduce the residual");
  }
  if (res <= tol) return x;
  throw InversionError("gradient inversion did not converge in 100 iterations");
}

LegendreConjugate::LegendreConjugate(std::shared_ptr<const SmoothFunction> base, Vec start,
                                     std::function<bool(const Vec&)> admissible, double tol)
    : base_(std::move(base)), start_(std::move(start)), admissible_(std::move(admissible)), tol_(tol) {}

Vec LegendreConjugate::preimage(const Vec& y) const {
  Vec x = solve_gradient_equation(*base_, y, start_, tol_);
  if (admissible_ && !admissible_(x)) throw DomainError("gradient preimage lies outside the domain");
  return x;
}

Jet LegendreConjugate::jet(const Vec& y) const {
  const Vec x = preimage(y);
  const Jet J = base_->jet(x);
  return {y.dot(x) - J.value, x, J.hessian.inverse()};
}

double LegendreConjugate::value(const Vec& y) const {
  const Vec x = preimage(y);
  return y.dot(x) - base_->value(x);
}

bool Box::contains(const Vec& y) const {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] < lo[i] || y[i] > hi[i]) return false;
  }
  return true;
}

Box gradient_image_box(const SmoothFunction& F, const Vec& center, double radius, int per_axis) {
  const int n = F.dimension();
  per_axis = std::max(per_axis, 2);
  const auto pts = ball_grid(center, radius, static_cast<int>(std::pow(per_axis, n) + 0.5));
  Box box{Vec::Constant(n, std::numeric_limits<double>::infinity()),
          Vec::Constant(n, -std::numeric_limits<double>::infinity())};
  double max_row = 0.0;
  for (const Vec& x : pts) {
    const Jet J = F.jet(x);
    box.lo = box.lo.cwiseMin(J.gradient);
    box.hi = box.hi.cwiseMax(J.gradient);
    max_row = std::max(max_row, J.hessian.cwiseAbs().rowwise().sum().maxCoeff());
  }
  const double h = 2.0 * radius / (per_axis - 1);
  const double margin = 2.0 * max_row * 0.5 * h + 1e-12;
  box.lo.array() -= margin;
  box.hi.array() += margin;
  return box;
}

namespace {

std::function<bool(const Vec&)> inside_D(const ManifoldSpec& spec) {
  return [x0 = spec.x0, r = 2.0 * spec.eps0](const Vec& x) { return sup_norm(x - x0) < r; };
}

}  // namespace

DualFamily::DualFamily(PencilFunction F, WeightFunction w, double inv_tol)
    : F_(std::make_shared<PencilFunction>(std::move(F))), w_(std::move(w)), inv_tol_(inv_tol) {
  if (w_.dimension() != F_->dimension()) throw ParameterError("weight and pencil dimensions differ");
  const ManifoldSpec& spec = F_->spec();
  Fstar_ = std::make_shared<LegendreConjugate>(F_, spec.x0, inside_D(spec), inv_tol_);
  Fstarstar_ = std::make_shared<LegendreConjugate>(Fstar_, F_->gradient(spec.x0),
                                                   std::function<bool(const Vec&)>{}, inv_tol_);
}

Vec DualFamily::invert_gradient(const Vec& y) const { return Fstar_->preimage(y); }

double DualFamily::conjugate(const Vec& y) const { return Fstar_->value(y); }

Jet DualFamily::conjugate_jet(const Vec& y) const { return Fstar_->jet(y); }

double DualFamily::dual_weight(const Vec& y) const {
  try {
    return w_(invert_gradient(y));
  } catch (const Error&) {
    return 0.0;
  }
}

double DualFamily::hessian_det_at_preimage(const Vec& y) const {
  return std::fabs(F_->jet(invert_gradient(y)).hessian.determinant());
}

double DualFamily::biconjugate(const Vec& x) const { return Fstarstar_->value(x); }

Box DualFamily::range_box() const {
  const ManifoldSpec& spec = F_->spec();
  return gradient_image_box(*F_, spec.x0, 2.0 * spec.eps0);
}

Box DualFamily::support_box() const { return gradient_image_box(*F_, w_.center(), w_.radius()); }

LegendreResiduals legendre_residuals(const DualFamily& fam, int samples, double h) {
  const PencilFunction& F = fam.function();
  const ManifoldSpec& spec = F.spec();
  const int n = F.dimension();
  LegendreResiduals res;
  for (const Vec& x : ball_grid(spec.x0, spec.eps0, samples)) {
    const Jet J = F.jet(x);
    const Vec y = J.gradient;
    res.gradient_inversion = std::max(res.gradient_inversion, sup_norm(fam.invert_gradient(y) - x));
    res.involution = std::max(res.involution, std::fabs(fam.biconjugate(x) - J.value));
    Mat H(n, n);
    for (int i = 0; i < n; ++i) {
      Vec up = y, down = y;
      up[i] += h;
      down[i] -= h;
      H.col(i) = (fam.invert_gradient(up) - fam.invert_gradient(down)) / (2.0 * h);
    }
    const Mat defect = H * J.hessian - Mat::Identity(n, n);
    res.inverse_hessian = std::max(res.inverse_hessian, defect.cwiseAbs().maxCoeff());
    ++res.samples;
  }
  return res;
}

}  // namespace rpnm

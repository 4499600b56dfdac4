#include "rpnm/oscint.hpp"

#include "rpnm/errors.hpp"
#include "rpnm/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace rpnm {

Complex e(double t) {
  const double frac = t - std::nearbyint(t);
  const double a = 2.0 * std::numbers::pi * frac;
  return {std::cos(a), std::sin(a)};
}

OscIntegral::OscIntegral(std::shared_ptr<const SmoothFunction> phase, std::function<double(const Vec&)> amplitude,
                         Box support, double lambda, std::optional<Vec> critical_point)
    : phase_(std::move(phase)),
      amplitude_(std::move(amplitude)),
      support_(std::move(support)),
      lambda_(lambda),
      critical_point_(std::move(critical_point)) {
  if (!phase_) throw ParameterError("phase is required");
  if (support_.lo.size() != support_.hi.size() || support_.lo.size() == 0) {
    throw ParameterError("support box is malformed");
  }
  if (phase_->dimension() != dimension()) throw ParameterError("phase and support dimensions differ");
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) throw ParameterError("lambda must be nonnegative");
  if (critical_point_ && critical_point_->size() != dimension()) {
    throw ParameterError("critical point has wrong dimension");
  }
}

OscIntegral OscIntegral::with_lambda(double lambda) const {
  return OscIntegral(phase_, amplitude_, support_, lambda, critical_point_);
}

namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite Gauss-Legendre rule on [lo, hi] with `panels` panels.
Rule composite_rule(double lo, double hi, long long panels, int m) {
  std::vector<double> x, w;
  gauss_legendre(m, x, w);
  Rule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * m);
  rule.weights.reserve(static_cast<std::size_t>(panels) * m);
  const double h = (hi - lo) / static_cast<double>(panels);
  for (long long p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    for (int i = 0; i < m; ++i) {
      rule.nodes.push_back(mid + 0.5 * h * x[i]);
      rule.weights.push_back(0.5 * h * w[i]);
    }
  }
  return rule;
}

Complex tensor_quadrature(const OscIntegral& I, long long panels, const QuadratureOptions& opts) {
  const int d = I.dimension();
  std::vector<Rule> rules;
  for (int i = 0; i < d; ++i) {
    rules.push_back(composite_rule(I.support().lo[i], I.support().hi[i], panels, opts.nodes_per_panel));
  }
  const std::size_t per_axis = rules[0].nodes.size();
  const double lambda = I.lambda();
  // Parallel over the first axis; each slice is reduced in fixed order.
  auto slices = parallel_map<Complex>(per_axis, opts.shards, [&](std::size_t i0) {
    Vec v(d);
    v[0] = rules[0].nodes[i0];
    CompensatedSum re, im;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
      double weight = rules[0].weights[i0];
      for (int k = 1; k < d; ++k) {
        v[k] = rules[k].nodes[idx[k]];
        weight *= rules[k].weights[idx[k]];
      }
      const double amp = I.amplitude(v);
      if (amp != 0.0) {
        const Complex z = e(lambda * I.phase().value(v)) * (amp * weight);
        re.add(z.real());
        im.add(z.imag());
      }
      int k = d - 1;
      while (k >= 1 && idx[k] + 1 == per_axis) idx[k--] = 0;
      if (k < 1) break;
      ++idx[k];
    }
    return Complex(re.value(), im.value());
  });
  CompensatedSum re, im;
  for (const auto& z : slices) {
    re.add(z.real());
    im.add(z.imag());
  }
  return {re.value(), im.value()};
}

}  // namespace

QuadratureResult evaluate(const OscIntegral& integral, int refinement, const QuadratureOptions& opts) {
  if (refinement < 1) throw ParameterError("refinement must be at least 1");
  if (opts.nodes_per_panel < 1) throw ParameterError("nodes per panel must be positive");
  const int d = integral.dimension();
  const double lam = std::ceil(integral.lambda());
  long long panels =
      std::max(64LL, static_cast<long long>(std::ceil(8.0 * std::pow(std::max(lam, 1.0), 1.0 / d))));
  auto total = [d](long long p) { return std::pow(static_cast<long double>(p), d); };
  if (total(panels) > static_cast<long double>(opts.max_panels)) {
    throw QuadratureError("initial panel count exceeds the cap", 0, 0, 0, 0);
  }
  QuadratureResult res;
  Complex previous = tensor_quadrature(integral, panels, opts);
  res.panels_per_axis = panels;
  for (int level = 1; level <= refinement; ++level) {
    const long long next = 2 * panels;
    if (total(next) > static_cast<long double>(opts.max_panels)) break;
    const Complex current = tensor_quadrature(integral, next, opts);
    const double diff = std::abs(current - previous);
    panels = next;
    res.panels_per_axis = panels;
    res.levels = level;
    if (diff < opts.tol) {
      res.value = current;
      res.error_estimate = diff;
      return res;
    }
    previous = current;
    res.value = current;
    res.error_estimate = diff;
  }
  throw QuadratureError("quadrature did not converge within the refinement cap", res.value.real(),
                        res.value.imag(), previous.real(), previous.imag());
}

CriticalPointData critical_point_data(const OscIntegral& integral) {
  if (!integral.critical_point()) throw ParameterError("integral has no critical point");
  const Vec& v0 = *integral.critical_point();
  const Jet J = integral.phase().jet(v0);
  if (sup_norm(J.gradient) > 1e-10) throw ParameterError("gradient does not vanish at the critical point");
  Eigen::SelfAdjointEigenSolver<Mat> eig(J.hessian);
  CriticalPointData out;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double ev = eig.eigenvalues()[i];
    if (std::fabs(ev) <= 1e-10) throw ParameterError("degenerate critical point");
    out.sigma += ev > 0 ? 1 : -1;
  }
  out.Delta = std::fabs(J.hessian.determinant());
  return out;
}

Complex stationary_phase_prediction(const OscIntegral& integral) {
  const CriticalPointData c = critical_point_data(integral);
  const Vec& v0 = *integral.critical_point();
  const double lambda = integral.lambda();
  const int d = integral.dimension();
  if (!(lambda > 0.0)) throw ParameterError("prediction needs lambda > 0");
  const double scale = std::pow(lambda, -0.5 * d) / std::sqrt(c.Delta);
  return scale * integral.amplitude(v0) * e(lambda * integral.phase().value(v0) + c.sigma / 8.0);
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DataError("least squares needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DataError("least squares needs distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::vector<double> geometric_grid(double start, double ratio, int count) {
  std::vector<double> out;
  double v = start;
  for (int i = 0; i < count; ++i, v *= ratio) out.push_back(v);
  return out;
}

DecayFit decay_slope(DecayKind kind, const OscIntegral& family, const std::vector<double>& lambdas,
                     int refinement, const QuadratureOptions& opts) {
  if (lambdas.size() < 5) throw ParameterError("decay fit needs at least five lambda values");
  DecayFit fit;
  std::vector<double> xs, ys;
  for (double lambda : lambdas) {
    const OscIntegral I = family.with_lambda(lambda);
    const Complex value = evaluate(I, refinement, opts).value;
    double magnitude = std::abs(value);
    if (kind == DecayKind::stationary) {
      const Complex pred = stationary_phase_prediction(I);
      fit.predictions.push_back(std::abs(pred));
      magnitude = std::abs(value - pred);
    }
    fit.lambdas.push_back(lambda);
    fit.magnitudes.push_back(magnitude);
    if (magnitude >= 1e-14) {
      xs.push_back(std::log(lambda));
      ys.push_back(std::log(magnitude));
    }
  }
  fit.used_points = static_cast<int>(xs.size());
  if (xs.empty()) {
    // Everything is below the noise floor: no measurable growth.
    fit.slope = -std::numeric_limits<double>::infinity();
    return fit;
  }
  const LineFit line = least_squares(xs, ys);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  return fit;
}

// ---------------------------------------------------------------------------
// Phases

namespace {

class QuadraticPhase : public SmoothFunction {
 public:
  explicit QuadraticPhase(Mat H) : H_(std::move(H)) {}
  int dimension() const override { return static_cast<int>(H_.rows()); }
  Jet jet(const Vec& v) const override { return {value(v), H_ * v, H_}; }
  double value(const Vec& v) const override { return 0.5 * v.dot(H_ * v); }

 private:
  Mat H_;
};

class LinearPhase : public SmoothFunction {
 public:
  explicit LinearPhase(Vec c) : c_(std::move(c)) {}
  int dimension() const override { return static_cast<int>(c_.size()); }
  Jet jet(const Vec& v) const override {
    return {value(v), c_, Mat::Zero(c_.size(), c_.size())};
  }
  double value(const Vec& v) const override { return c_.dot(v); }

 private:
  Vec c_;
};

// base(v) - c.v
class ShiftedPhase : public SmoothFunction {
 public:
  ShiftedPhase(std::shared_ptr<const SmoothFunction> base, Vec c) : base_(std::move(base)), c_(std::move(c)) {}
  int dimension() const override { return base_->dimension(); }
  Jet jet(const Vec& v) const override {
    Jet J = base_->jet(v);
    J.value -= c_.dot(v);
    J.gradient -= c_;
    return J;
  }
  double value(const Vec& v) const override { return base_->value(v) - c_.dot(v); }

 private:
  std::shared_ptr<const SmoothFunction> base_;
  Vec c_;
};

Vec frequency(const std::vector<long long>& k, long long js, int n) {
  if (static_cast<int>(k.size()) != n) throw ParameterError("frequency vector has wrong dimension");
  Vec c(n);
  for (int i = 0; i < n; ++i) c[i] = static_cast<double>(k[i]) / static_cast<double>(js);
  return c;
}

}  // namespace

std::shared_ptr<const SmoothFunction> quadratic_phase(Mat H) {
  if (H.rows() != H.cols() || H.rows() == 0) throw ParameterError("Hessian must be square");
  return std::make_shared<QuadraticPhase>(std::move(H));
}

std::shared_ptr<const SmoothFunction> linear_phase(Vec direction) {
  return std::make_shared<LinearPhase>(std::move(direction));
}

std::shared_ptr<const SmoothFunction> zero_phase(int d) { return linear_phase(Vec::Zero(d)); }

std::function<double(const Vec&)> bump_amplitude(const WeightFunction& w) {
  return [w](const Vec& v) { return w(v); };
}

OscIntegral primal_integral(const DualFamily& fam, long long q, const std::vector<long long>& k) {
  if (q < 1) throw ParameterError("q must be positive");
  const PencilFunction& F = fam.function();
  const long long js = F.j()[F.s() - 1];
  const Vec c = frequency(k, js, F.dimension());
  const WeightFunction& w = fam.weight();
  Box support{w.center().array() - w.radius(), w.center().array() + w.radius()};
  std::optional<Vec> v0;
  try {
    Vec x = fam.invert_gradient(c);
    if (support.contains(x)) v0 = x;
  } catch (const Error&) {
  }
  return OscIntegral(std::make_shared<ShiftedPhase>(fam.primal(), c), bump_amplitude(w), std::move(support),
                     static_cast<double>(q * js), std::move(v0));
}

OscIntegral dual_integral(const DualFamily& fam, long long d, const std::vector<long long>& k) {
  if (d < 1) throw ParameterError("d must be positive");
  const PencilFunction& F = fam.function();
  const long long js = F.j()[F.s() - 1];
  const Vec c = frequency(k, js, F.dimension());
  Box support = fam.support_box();
  auto amplitude = [fam](const Vec& z) -> double {
    try {
      const Vec x = fam.invert_gradient(z);
      const double wx = fam.weight()(x);
      if (wx == 0.0) return 0.0;
      return wx / std::sqrt(std::fabs(fam.function().jet(x).hessian.determinant()));
    } catch (const Error&) {
      return 0.0;
    }
  };
  std::optional<Vec> v0;
  const ManifoldSpec& spec = F.spec();
  if (sup_norm(c - spec.x0) < 2.0 * spec.eps0) {
    Vec z = F.gradient(c);
    if (support.contains(z)) v0 = z;
  }
  return OscIntegral(std::make_shared<ShiftedPhase>(fam.conjugate_function(), c), amplitude, std::move(support),
                     static_cast<double>(d * js), std::move(v0));
}

}  // namespace rpnm

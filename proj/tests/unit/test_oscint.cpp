#include "rpnm/errors.hpp"
#include "rpnm/oscint.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rpnm;

namespace {

Box cube(int d, double r) { return Box{Vec::Constant(d, -r), Vec::Constant(d, r)}; }

OscIntegral quadratic_bump(Mat H, double lambda, double radius = 0.5) {
  const int d = static_cast<int>(H.rows());
  const WeightFunction w(Vec::Zero(d), radius);
  return OscIntegral(quadratic_phase(std::move(H)), bump_amplitude(w), cube(d, radius), lambda, Vec::Zero(d));
}

}  // namespace

TEST_CASE("e(t) is periodic and unimodular") {
  CHECK(std::abs(e(0.25) - Complex(0, 1)) <= 1e-15);
  CHECK(std::abs(e(1e6 + 0.5) - Complex(-1, 0)) <= 1e-12);
  CHECK(std::abs(e(-0.125)) == doctest::Approx(1.0));
}

TEST_CASE("lambda = 0 integrates the amplitude") {
  const WeightFunction w(Vec::Zero(2), 0.5);
  const OscIntegral I(quadratic_phase(Mat::Identity(2, 2)), bump_amplitude(w), cube(2, 0.5), 0.0);
  const auto res = evaluate(I);
  CHECK(std::fabs(res.value.real() - w.w_hat_zero()) <= 1e-10);
  CHECK(std::fabs(res.value.imag()) <= 1e-14);
}

TEST_CASE("Gaussian Fresnel integral in closed form") {
  // integral of exp(-pi x^2) e(lambda x^2 / 2) = (1 - i lambda)^{-1/2}
  const auto gauss = [](const Vec& v) { return std::exp(-std::numbers::pi * v.squaredNorm()); };
  for (double lambda : {0.5, 3.0, 20.0, 75.0}) {
    const OscIntegral I(quadratic_phase(Mat::Identity(1, 1)), gauss, cube(1, 6.0), lambda);
    const Complex want = 1.0 / std::sqrt(Complex(1.0, -lambda));
    CHECK(std::abs(evaluate(I).value - want) <= 1e-10);
  }
}

TEST_CASE("critical point data") {
  CHECK(critical_point_data(quadratic_bump(Mat::Identity(2, 2), 1)).sigma == 2);
  Mat saddle = Mat::Identity(2, 2);
  saddle(1, 1) = -1;
  const auto cd = critical_point_data(quadratic_bump(saddle, 1));
  CHECK(cd.sigma == 0);
  CHECK(cd.Delta == doctest::Approx(1.0));
  Mat degenerate = Mat::Zero(2, 2);
  degenerate(0, 0) = 1;
  CHECK_THROWS_AS(critical_point_data(quadratic_bump(degenerate, 1)), ParameterError);
  const WeightFunction w(Vec::Zero(1), 0.5);
  const OscIntegral none(quadratic_phase(Mat::Identity(1, 1)), bump_amplitude(w), cube(1, 0.5), 1.0);
  CHECK_THROWS_AS(critical_point_data(none), ParameterError);
}

TEST_CASE("stationary phase prediction") {
  SUBCASE("d = 1 matches the quadrature to leading order") {
    for (double lambda : {200.0, 800.0}) {
      const auto I = quadratic_bump(Mat::Identity(1, 1), lambda);
      const Complex pred = stationary_phase_prediction(I);
      CHECK(std::abs(pred - Complex(std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4)) /
                                std::sqrt(lambda)) <= 1e-14);
      CHECK(std::abs(evaluate(I).value - pred) <= 0.2 * std::abs(pred));
    }
  }
  SUBCASE("Hessian scaling gives the factor 2^{-d/2}") {
    const auto a = stationary_phase_prediction(quadratic_bump(Mat::Identity(2, 2), 50));
    const auto b = stationary_phase_prediction(quadratic_bump(2.0 * Mat::Identity(2, 2), 50));
    CHECK(std::abs(b) / std::abs(a) == doctest::Approx(0.5));
  }
  SUBCASE("saddle has no phase shift") {
    Mat saddle = Mat::Identity(2, 2);
    saddle(1, 1) = -1;
    const auto p = stationary_phase_prediction(quadratic_bump(saddle, 16));
    CHECK(std::abs(p - Complex(1.0 / 16.0, 0)) <= 1e-15);
  }
  CHECK_THROWS_AS(stationary_phase_prediction(quadratic_bump(Mat::Identity(1, 1), 0)), ParameterError);
}

TEST_CASE("odd amplitude against an even phase integrates to zero") {
  const WeightFunction w(Vec::Zero(1), 0.5);
  const auto odd = [w](const Vec& v) { return v[0] * w(v); };
  const OscIntegral I(quadratic_phase(Mat::Identity(1, 1)), odd, cube(1, 0.5), 37.0);
  CHECK(std::abs(evaluate(I).value) <= 1e-12);
}

TEST_CASE("decay slopes") {
  SUBCASE("stationary remainder decays like lambda^{-3/2} in d = 1") {
    const auto fit =
        decay_slope(DecayKind::stationary, quadratic_bump(Mat::Identity(1, 1), 1), geometric_grid(50, 1.5, 6));
    CHECK(fit.used_points == 6);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(0.1));
  }
  SUBCASE("nonstationary phase decays fast") {
    const WeightFunction w(Vec::Zero(1), 0.5);
    const OscIntegral lin(linear_phase(Vec::Constant(1, 1.0)), bump_amplitude(w), cube(1, 0.5), 1);
    const auto fit = decay_slope(DecayKind::nonstationary, lin, geometric_grid(4, 1.4, 6));
    CHECK(fit.slope < -3.0);
  }
  SUBCASE("constant phase does not decay") {
    const WeightFunction w(Vec::Zero(1), 0.5);
    const OscIntegral flat(zero_phase(1), bump_amplitude(w), cube(1, 0.5), 1);
    const auto fit = decay_slope(DecayKind::nonstationary, flat, geometric_grid(2, 2, 5));
    CHECK(std::fabs(fit.slope) <= 1e-10);
  }
  CHECK_THROWS_AS(decay_slope(DecayKind::nonstationary, quadratic_bump(Mat::Identity(1, 1), 1), {1, 2, 3}),
                  ParameterError);
}

TEST_CASE("primal and dual integrals agree for the paraboloid") {
  QuadratureOptions opts;
  opts.nodes_per_panel = 6;
  const auto spec = make_paraboloid(2, Vec::Zero(2), 0.5);
  const DualFamily fam(pencil_function(spec, 1, {1}, {}), WeightFunction(Vec::Zero(2), 0.5));
  for (long long q : {1LL, 3LL}) {
    const std::vector<long long> k(2, 0);
    const auto p = evaluate(primal_integral(fam, q, k), 8, opts).value;
    const auto d = evaluate(dual_integral(fam, q, k), 8, opts).value;
    CHECK(std::abs(p - d) <= 1e-8);
  }
}

TEST_CASE("quadrature and fitting errors") {
  QuadratureOptions tiny;
  tiny.max_panels = 10;
  CHECK_THROWS_AS(evaluate(quadratic_bump(Mat::Identity(1, 1), 5), 8, tiny), QuadratureError);
  QuadratureOptions strict;
  strict.tol = 0.0;
  CHECK_THROWS_AS(evaluate(quadratic_bump(Mat::Identity(1, 1), 5), 2, strict), QuadratureError);
  CHECK_THROWS_AS(evaluate(quadratic_bump(Mat::Identity(1, 1), 5), 0), ParameterError);
  CHECK_THROWS_AS(quadratic_bump(Mat::Identity(1, 1), -1), ParameterError);
  CHECK_THROWS_AS(least_squares({1}, {2}), DataError);
  CHECK_THROWS_AS(least_squares({1, 1}, {2, 3}), DataError);
  const auto fit = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  const auto grid = geometric_grid(2, 3, 4);
  CHECK(grid == std::vector<double>{2, 6, 18, 54});
}

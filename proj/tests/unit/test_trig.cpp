#include "rpnm/errors.hpp"
#include "rpnm/trig.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rpnm;

TEST_CASE("selberg_pair: mean values") {
  const auto pair = selberg_pair(-0.1, 0.1, 4);
  CHECK(std::abs(pair.majorant.coefficient(0) - 0.4) <= 1e-14);
  CHECK(std::abs(pair.minorant.coefficient(0) - 0.0) <= 1e-14);
}

TEST_CASE("selberg_pair: sandwich and coefficient bounds for random arcs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> start(-1.0, 1.0), length(0.01, 0.95);
  std::uniform_int_distribution<int> degree(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = start(rng);
    const double b = a + length(rng);
    const int J = degree(rng);
    const auto chk = check_selberg(selberg_pair(a, b, J), 4096);
    CHECK(chk.sandwich);
    CHECK(chk.mean_values);
    CHECK(chk.coefficient_bound);
  }
}

TEST_CASE("selberg_pair: degree-J coefficient bound") {
  const int J = 9;
  const auto pair = selberg_pair(0.2, 0.55, J);
  for (const auto* p : {&pair.minorant, &pair.majorant}) {
    CHECK(std::abs(p->coefficient(J)) <= 1.0 / (J + 1) + 1.0 / (std::numbers::pi * J) + 1e-15);
  }
}

TEST_CASE("selberg_pair: majorant near the indicator for large J") {
  const auto pair = selberg_pair(0.3, 0.7, 64);
  const double mid = evaluate(pair.majorant, 0.5);
  CHECK(mid >= 1.0 - 1e-12);
  CHECK(mid <= 1.1);
}

TEST_CASE("selberg_pair: degenerate input") {
  CHECK_THROWS_AS(selberg_pair(0.1, 0.1, 3), ParameterError);
  CHECK_THROWS_AS(selberg_pair(0.0, 1.0, 3), ParameterError);
  CHECK_THROWS_AS(selberg_pair(0.0, 0.5, 0), ParameterError);
}

TEST_CASE("trig polynomials are real and agree with Horner evaluation") {
  const auto pair = selberg_pair(-0.23, 0.31, 12);
  for (const auto* p : {&pair.minorant, &pair.majorant}) {
    for (int j = 1; j <= p->degree(); ++j) {
      CHECK(std::abs(p->coefficient(-j) - std::conj(p->coefficient(j))) <= 1e-15);
    }
    for (int k = 0; k < 50; ++k) {
      const double theta = k / 50.0 + 0.003;
      CHECK(std::fabs(p->evaluate(theta) - p->evaluate_horner(theta).real()) <= 1e-12);
    }
  }
  CHECK(evaluate(TrigPolynomial(), 0.3) == 0.0);
}

TEST_CASE("fejer kernel") {
  CHECK(evaluate(fejer(2), 0.0) == doctest::Approx(1.0));
  CHECK(std::fabs(fejer(2).evaluate(0.5)) <= 1e-15);
  CHECK(fejer_closed_form(2, 0.5) == doctest::Approx(0.0));
  for (int D = 1; D <= 64; ++D) {
    const auto F = fejer(D);
    CHECK(F.evaluate(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(F.coefficient(0).real() == doctest::Approx(1.0 / D));
    double worst_closed = 0.0, minimum = 1.0;
    for (int k = 0; k < 257; ++k) {
      const double theta = k / 257.0;
      const double v = F.evaluate(theta);
      worst_closed = std::max(worst_closed, std::fabs(v - fejer_closed_form(D, theta)));
      minimum = std::min(minimum, v);
    }
    CHECK(worst_closed <= 1e-12);
    CHECK(minimum >= -1e-13);
  }
}

TEST_CASE("fejer kernel integrates to its zero coefficient") {
  for (int D : {1, 3, 10, 33}) {
    const auto F = fejer(D);
    // The trapezoid rule with more than 2D nodes is exact for degree-D polynomials.
    const int m = 4 * D + 3;
    double sum = 0.0;
    for (int k = 0; k < m; ++k) sum += F.evaluate(static_cast<double>(k) / m);
    CHECK(std::fabs(sum / m - 1.0 / D) <= 1e-12);
  }
}

TEST_CASE("fejer minorant check") {
  CHECK(fejer_minorant_check(0.25, 1024));
  CHECK(fejer_minorant_check(0.05, 4096));
  CHECK(fejer_minorant_check(0.1, 4096));
  CHECK(fejer_minorant_check(0.01, 4096));
  const double ds = 0.05;
  const int D = static_cast<int>(std::floor(1.0 / (2 * ds)));
  CHECK(fejer(D).evaluate(ds) >= 4.0 / (std::numbers::pi * std::numbers::pi) - 1e-12);
}

TEST_CASE("nearest integer distance") {
  CHECK(nearest_integer_distance(2.25) == 0.25);
  CHECK(nearest_integer_distance(-0.75) == 0.25);
  CHECK(nearest_integer_distance(0.5) == 0.5);
  CHECK(nearest_integer_distance(3.0) == 0.0);
}

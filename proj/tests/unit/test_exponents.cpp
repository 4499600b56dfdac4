#include "rpnm/errors.hpp"
#include "rpnm/exponents.hpp"
#include "rpnm/manifold.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rpnm;

namespace {

Rational r(long long a, long long b = 1) { return rational(a, b); }

ApproximationProfile powers(std::vector<Rational> tau) { return ApproximationProfile{std::move(tau), {}}; }

}  // namespace

TEST_CASE("theta examples") {
  CHECK(theta(2, 1) == 2);
  CHECK(theta(3, 1) == 3);
  CHECK(theta(4, 3) == r(23, 7));
  CHECK(theta(4, 2) == beta_limit(4, 2));
  CHECK_THROWS_AS(theta(1, 1), ParameterError);
  CHECK_THROWS_AS(theta(2, 0), ParameterError);
}

TEST_CASE("stopping values") {
  CHECK(beta_stop(4, 3) == r(10, 3));
  CHECK(beta_stop(2, 1) == 2);
  CHECK(alpha_stop(2, 1) == 2);
  CHECK(alpha_stop(4, 3) == r(6, 1) - r(1, 2));
}

TEST_CASE("beta step examples and range") {
  CHECK(beta_step(2, 1, r(3)) == r(7, 3));
  CHECK(beta_step(2, 1, r(7, 3)) == r(11, 5));
  CHECK_THROWS_AS(beta_step(2, 1, r(19, 10)), RangeError);
  CHECK_THROWS_AS(beta_step(2, 1, r(4)), RangeError);
  CHECK_THROWS_AS(beta_map(2, 1, r(1)), RangeError);
}

TEST_CASE("alpha and beta maps") {
  CHECK(alpha_from_beta(2, 1, r(3)) == r(5, 2));
  CHECK(beta_from_alpha(2, 1, r(5, 2)) == r(7, 3));
  CHECK_THROWS_AS(beta_from_alpha(2, 1, r(1)), RangeError);
  CHECK_THROWS_AS(alpha_from_beta(2, 1, r(1)), RangeError);

  std::mt19937_64 rng(7);
  int checked = 0;
  for (auto [n, R] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 2}, {5, 1}, {8, 4}, {16, 9}}) {
    const Rational lo = beta_stop(n, R), hi = r(n + 1);
    for (int i = 0; i < 50; ++i) {
      const Rational beta = lo + (hi - lo) * r(static_cast<long long>(rng() % 1000) + 1, 1001);
      const Rational first = r(n + R) - r(n) / (2 * beta - n);
      if (first < r(n + R - 1) - r(2, n)) continue;
      CHECK(beta_from_alpha(n, R, alpha_from_beta(n, R, beta)) == beta_step(n, R, beta));
      ++checked;
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("beta sequence") {
  SUBCASE("n = 2 closed form") {
    const auto seq = beta_sequence(2, 1, 20);
    REQUIRE(seq.iterates.size() == 21);
    for (int i = 0; i <= 20; ++i) CHECK(seq.iterates[i] == 2 + r(1, 2 * i + 1));
    CHECK(seq.strictly_decreasing);
    CHECK(seq.contraction_holds);
    CHECK_FALSE(seq.steps_to_converge);
  }
  SUBCASE("n = 3 converges geometrically") {
    const auto seq = beta_sequence(3, 1, 200);
    REQUIRE(seq.steps_to_converge);
    CHECK(seq.contraction_holds);
    CHECK(seq.iterates.back() - beta_limit(3, 1) < Rational(1) / Rational(BigInt(1) << 40));
  }
  SUBCASE("R >= 3 stops below beta_st and closes at theta") {
    const auto seq = beta_sequence(4, 3, 100);
    CHECK(seq.stopped_below_stop);
    REQUIRE(seq.final_value);
    CHECK(*seq.final_value == theta(4, 3));
    CHECK(seq.iterates.back() < beta_stop(4, 3));
    for (std::size_t i = 0; i + 1 < seq.iterates.size(); ++i) CHECK(seq.iterates[i] >= beta_stop(4, 3));
  }
  CHECK_THROWS_AS(beta_sequence(3, 1, 0), ParameterError);
}

TEST_CASE("fixed point and contraction over admissible pairs") {
  for (int n = 2; n <= 16; ++n) {
    for (int R = 1; R <= radon_hurwitz(n); ++R) {
      const Rational limit = beta_limit(n, R);
      CHECK(beta_map(n, R, limit) == limit);
      const auto seq = beta_sequence(n, R, 60);
      CHECK(seq.contraction_holds);
      CHECK(seq.strictly_decreasing);
      if (R >= 3) {
        REQUIRE(seq.final_value);
        CHECK(*seq.final_value == theta(n, R));
      }
    }
  }
}

TEST_CASE("delta range exponent") {
  CHECK(delta_range_exponent(2, 2) == r(-2, 3));
  CHECK(delta_range_exponent(2, 1) == -1);
  CHECK(delta_range_exponent(4, 3) == r(-4, 7));
  for (int n = 2; n <= 16; ++n) {
    for (int R = 1; R <= radon_hurwitz(n); ++R) CHECK_NOTHROW(delta_range_exponent(n, R));
  }
}

TEST_CASE("error factors") {
  CHECK(error_factor_kind(2, 1) == ErrorFactorKind::sqrt_exponential);
  CHECK(error_factor_kind(3, 1) == ErrorFactorKind::polylog);
  CHECK(error_factor_kind(4, 2) == ErrorFactorKind::loglog_squared);
  CHECK_THROWS_AS(error_factor_kind(2, 2), UnspecifiedBranch);
  CHECK(error_factor_tilde_kind(2) == ErrorFactorKind::sqrt_exponential);
  CHECK(error_factor_tilde_kind(5) == ErrorFactorKind::polylog);
  const double L = std::log(400.0);
  CHECK(error_factor(ErrorFactorKind::sqrt_exponential, 100, 2) == doctest::Approx(std::exp(2 * std::sqrt(L))));
  CHECK(error_factor(ErrorFactorKind::polylog, 100, 1, 3) == doctest::Approx(L * L * L));
  CHECK(error_factor(ErrorFactorKind::loglog_squared, 100) ==
        doctest::Approx(std::exp(std::log(L) * std::log(L))));
  CHECK_THROWS_AS(error_factor(ErrorFactorKind::polylog, 0.5), ParameterError);
}

TEST_CASE("Hausdorff dimension") {
  CHECK(hausdorff_dimension(2, 1, powers({r(1, 2), r(1, 2)})) == r(5, 3));
  CHECK(hausdorff_dimension(3, 1, powers({r(1, 3), r(1, 3)})) == r(11, 4));
  const Rational t = r(2, 5);
  CHECK(hausdorff_dimension(4, 2, powers({t, t, t})) == r(7) / (t + 1) - 2);
  CHECK_THROWS_AS(hausdorff_dimension(2, 1, powers({r(1, 3), r(1, 3)})), RangeError);
  CHECK_THROWS_AS(hausdorff_dimension(2, 1, powers({r(1, 2), r(3, 5)})), RangeError);
  CHECK_THROWS_AS(hausdorff_dimension(2, 1, powers({r(1, 2)})), ParameterError);
  ApproximationProfile general = powers({r(1, 2), r(1, 2)});
  general.psi.push_back([](double q) { return 1.0 / q; });
  CHECK_THROWS_AS(hausdorff_dimension(2, 1, general), UnsupportedError);
}

TEST_CASE("Khintchine series") {
  const auto half = powers({r(1, 2), r(1, 2)});
  CHECK(khintchine_exponent(2, half, r(2)) == r(-3, 2));
  CHECK(khintchine_series_converges(2, 1, half, r(2)) == SeriesVerdict::converges);
  CHECK_THROWS_AS(khintchine_series_converges(2, 1, half, r(1)), RangeError);
  ApproximationProfile general = half;
  general.psi.push_back([](double q) { return 1.0 / q; });
  CHECK_THROWS_AS(khintchine_series_converges(2, 1, general, r(2)), UnsupportedError);

  // The verdict flips exactly at the dimension value.
  const std::vector<std::tuple<int, int, ApproximationProfile>> cases = {
      {2, 1, half},
      {3, 1, powers({r(1, 2), r(1, 3)})},
      {4, 2, powers({r(2, 5), r(1, 3), r(1, 4)})},
      {8, 3, powers({r(1, 4), r(1, 5), r(1, 8), r(1, 6)})},
  };
  const Rational eps = r(1, 1000000);
  for (const auto& [n, R, prof] : cases) {
    const Rational dim = hausdorff_dimension(n, R, prof);
    CHECK(khintchine_exponent(n, prof, dim) == -1);
    CHECK(khintchine_series_converges(n, R, prof, dim) == SeriesVerdict::diverges);
    CHECK(khintchine_series_converges(n, R, prof, dim + eps) == SeriesVerdict::converges);
    if (dim - eps > r(n * R, R + 1)) {
      CHECK(khintchine_series_converges(n, R, prof, dim - eps) == SeriesVerdict::diverges);
    }
  }
}

TEST_CASE("exponent report") {
  const auto rep = exponent_report(4, 3, 50);
  CHECK(rep.theta == r(23, 7));
  CHECK(rep.beta_st == r(10, 3));
  CHECK(rep.delta_threshold_exponent == r(-4, 7));
  CHECK(rep.error_factor == ErrorFactorKind::loglog_squared);
  CHECK(rep.radon_hurwitz == 4);
  CHECK_FALSE(exponent_report(2, 2, 10).error_factor);
}

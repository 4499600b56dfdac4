#include "rpnm/exponents.hpp"

#include "rpnm/errors.hpp"
#include "rpnm/manifold.hpp"

#include <cmath>

namespace rpnm {

namespace {

void check_nR(int n, int R) {
  if (n < 2) throw ParameterError("n must be at least 2");
  if (R < 1) throw ParameterError("R must be at least 1");
}

Rational q(long long a, long long b = 1) { return rational(a, b); }

Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational power(Rational base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Rational theta(int n, int R) {
  check_nR(n, R);
  if (R <= 2) return beta_limit(n, R);
  return q(n + 1) - q(n * R) / (q(n + 2 * (R - 1)) - q(4, n));
}

Rational beta_limit(int n, int R) {
  check_nR(n, R);
  return q(n * (n + R + 1), n + 2 * R);
}

Rational beta_stop(int n, int R) {
  check_nR(n, R);
  return max(q(n * (n + R + 1), n + 2 * R), q(n * (n + 1), n + 2));
}

Rational alpha_stop(int n, int R) {
  check_nR(n, R);
  return max(q(n * (n + R + 1), n + 2), q(n + R - 1) - q(2, n));
}

Rational beta_map(int n, int R, const Rational& beta) {
  check_nR(n, R);
  const Rational inner = 2 * beta - n;
  if (inner == 0) throw RangeError("beta map undefined at 2 beta = n");
  const Rational denom = q(2 * R) + q(n) * (1 - 2 / inner);
  if (denom == 0) throw RangeError("beta map undefined: vanishing denominator");
  return q(n + 1) - q(n * R) / denom;
}

Rational beta_step(int n, int R, const Rational& beta) {
  if (beta < beta_stop(n, R) || beta > q(n + 1)) {
    throw RangeError("beta " + to_string(beta) + " outside [beta_st, n+1]");
  }
  return beta_map(n, R, beta);
}

Rational alpha_from_beta(int n, int R, const Rational& beta) {
  if (beta < beta_stop(n, R) || beta > q(n + 1)) {
    throw RangeError("beta " + to_string(beta) + " outside [beta_st, n+1]");
  }
  return max(q(n + R) - q(n) / (2 * beta - n), q(n + R - 1) - q(2, n));
}

Rational beta_from_alpha(int n, int R, const Rational& alpha) {
  check_nR(n, R);
  if (alpha < q(n * (n + R + 1), n + 2) || alpha > q(n + R)) {
    throw RangeError("alpha " + to_string(alpha) + " outside [n(n+R+1)/(n+2), n+R]");
  }
  return q(n + 1) - q(n * R) / (2 * alpha - n);
}

BetaSequence beta_sequence(int n, int R, int max_steps) {
  check_nR(n, R);
  if (max_steps < 1) throw ParameterError("max_steps must be at least 1");
  const Rational limit = beta_limit(n, R);
  const Rational stop = beta_stop(n, R);
  const Rational ratio = q(4 * R, n * n);
  const Rational eps = Rational(1) / power(q(2), 40);
  BetaSequence seq;
  Rational beta = n + 1;
  seq.iterates.push_back(beta);
  Rational bound = R;
  if (beta - limit > bound) seq.contraction_holds = false;
  for (int i = 1; i <= max_steps; ++i) {
    const Rational next = beta_step(n, R, beta);
    bound *= ratio;
    if (next >= beta) seq.strictly_decreasing = false;
    if (next - limit > bound) seq.contraction_holds = false;
    seq.iterates.push_back(next);
    beta = next;
    if (beta < stop) {
      // Two-phase argument: once below beta_st, one last application at
      // beta = beta_st closes the recursion.
      seq.stopped_below_stop = true;
      seq.final_value = beta_step(n, R, stop);
      seq.steps_to_converge = i;
      break;
    }
    if (beta - limit < eps) {
      seq.steps_to_converge = i;
      break;
    }
  }
  return seq;
}

Rational delta_range_exponent(int n, int R) {
  check_nR(n, R);
  const Rational via_theta = (theta(n, R) - (n + 1)) / R;
  Rational via_branches = -q(n + 2, n + 2 * R);
  const Rational denom = q(n + 2 * (R - 1)) - q(4, n);
  // The second branch tends to -infinity as its denominator vanishes from
  // above (only at (n, R) = (2, 1)), so it never attains the max there.
  if (denom > 0) via_branches = max(via_branches, -q(n) / denom);
  if (via_branches != via_theta) {
    throw ConsistencyError("delta-range representations disagree: " + to_string(via_theta) + " vs " +
                           to_string(via_branches));
  }
  return via_theta;
}

std::string to_string(ErrorFactorKind k) {
  switch (k) {
    case ErrorFactorKind::sqrt_exponential: return "exp(c1*sqrt(log 4Q))";
    case ErrorFactorKind::polylog: return "(log 4Q)^c2";
    case ErrorFactorKind::loglog_squared: return "exp(c2*(log log 4Q)^2)";
  }
  return "unknown";
}

ErrorFactorKind error_factor_kind(int n, int R) {
  check_nR(n, R);
  if (n == 2 && R == 1) return ErrorFactorKind::sqrt_exponential;
  if (n == 2) throw UnspecifiedBranch("no error factor is given for n = 2, R >= 2");
  if (R == 1) return ErrorFactorKind::polylog;
  return ErrorFactorKind::loglog_squared;
}

ErrorFactorKind error_factor_tilde_kind(int n) {
  if (n < 2) throw ParameterError("n must be at least 2");
  return n == 2 ? ErrorFactorKind::sqrt_exponential : ErrorFactorKind::polylog;
}

double error_factor(ErrorFactorKind kind, double Q, double c1, double c2) {
  if (!(Q >= 1.0)) throw ParameterError("Q must be at least 1");
  const double L = std::log(4.0 * Q);
  switch (kind) {
    case ErrorFactorKind::sqrt_exponential: return std::exp(c1 * std::sqrt(L));
    case ErrorFactorKind::polylog: return std::pow(L, c2);
    case ErrorFactorKind::loglog_squared: {
      const double LL = std::log(L);
      return std::exp(c2 * LL * LL);
    }
  }
  return 0.0;
}

namespace {

void check_profile(int n, int R, const ApproximationProfile& p) {
  check_nR(n, R);
  if (!p.psi.empty()) throw UnsupportedError("only power approximation functions are supported");
  if (static_cast<int>(p.tau.size()) != R + 1) throw ParameterError("tau must have R+1 entries");
  for (int r = 1; r <= R; ++r) {
    if (p.tau[r] > p.tau[0]) throw RangeError("tau_0 must dominate tau_1..tau_R");
  }
}

}  // namespace

Rational hausdorff_dimension(int n, int R, const ApproximationProfile& profile) {
  check_profile(n, R, profile);
  for (const auto& t : profile.tau) {
    if (t < q(1, n) || t >= q(1, R)) throw RangeError("tau entries must lie in [1/n, 1/R)");
  }
  Rational spread = 0;
  for (int r = 1; r <= R; ++r) spread += profile.tau[0] - profile.tau[r];
  return (q(n + R + 1) + spread) / (profile.tau[0] + 1) - R;
}

std::string to_string(SeriesVerdict v) { return v == SeriesVerdict::converges ? "converges" : "diverges"; }

Rational khintchine_exponent(int n, const ApproximationProfile& profile, const Rational& s) {
  Rational e = q(n) - s * (profile.tau[0] + 1);
  for (std::size_t r = 1; r < profile.tau.size(); ++r) e -= profile.tau[r];
  return e;
}

SeriesVerdict khintchine_series_converges(int n, int R, const ApproximationProfile& profile, const Rational& s) {
  check_profile(n, R, profile);
  if (s <= q(n * R, R + 1)) throw RangeError("s must exceed nR/(R+1)");
  return khintchine_exponent(n, profile, s) < -1 ? SeriesVerdict::converges : SeriesVerdict::diverges;
}

ExponentReport exponent_report(int n, int R, int max_steps) {
  ExponentReport rep;
  rep.n = n;
  rep.R = R;
  rep.theta = theta(n, R);
  rep.beta_st = beta_stop(n, R);
  rep.alpha_st = alpha_stop(n, R);
  rep.sequence = beta_sequence(n, R, max_steps);
  rep.delta_threshold_exponent = delta_range_exponent(n, R);
  try {
    rep.error_factor = error_factor_kind(n, R);
  } catch (const UnspecifiedBranch&) {
  }
  rep.radon_hurwitz = radon_hurwitz(n);
  return rep;
}

}  // namespace rpnm

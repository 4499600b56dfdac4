#pragma once

#include "rpnm/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rpnm {

// Exponent Theta(n, R) of the error term.
Rational theta(int n, int R);
// n(n+R+1)/(n+2R): the fixed point of the beta recursion.
Rational beta_limit(int n, int R);
Rational beta_stop(int n, int R);
Rational alpha_stop(int n, int R);

// n+1 - nR / (2R + n(1 - 2/(2 beta - n))), for beta in [beta_st, n+1].
Rational beta_step(int n, int R, const Rational& beta);
// The same formula without the range check (defined whenever 2 beta != n and
// the outer denominator is nonzero).
Rational beta_map(int n, int R, const Rational& beta);

// max(n+R - n/(2 beta - n), n+R-1-2/n), for beta in [beta_st, n+1].
Rational alpha_from_beta(int n, int R, const Rational& beta);
// n+1 - nR/(2 alpha - n), for alpha in [n(n+R+1)/(n+2), n+R].
Rational beta_from_alpha(int n, int R, const Rational& alpha);

struct BetaSequence {
  std::vector<Rational> iterates;        // beta_0 = n+1, beta_1, ...
  std::optional<int> steps_to_converge;  // first i with beta_i - limit < 2^-40
  bool contraction_holds = true;         // beta_i - limit <= (4R/n^2)^i R at every i
  bool strictly_decreasing = true;
  bool stopped_below_stop = false;       // R >= 3: some beta_i fell below beta_st
  std::optional<Rational> final_value;   // R >= 3: beta_step(beta_st), equal to Theta
};

BetaSequence beta_sequence(int n, int R, int max_steps);

// (Theta - (n+1)) / R, checked against max(-(n+2)/(n+2R), -n/(n+2(R-1)-4/n)).
Rational delta_range_exponent(int n, int R);

enum class ErrorFactorKind { sqrt_exponential, polylog, loglog_squared };
std::string to_string(ErrorFactorKind k);

// Branch of E_n(Q); (n, R) = (2, 2) has no branch and raises UnspecifiedBranch.
ErrorFactorKind error_factor_kind(int n, int R);
// Branch of the second error factor, which depends on n only.
ErrorFactorKind error_factor_tilde_kind(int n);
// exp(c1 sqrt(log 4Q)), (log 4Q)^c2 or exp(c2 (log log 4Q)^2).
double error_factor(ErrorFactorKind kind, double Q, double c1 = 1.0, double c2 = 1.0);

struct ApproximationProfile {
  // psi_r(q) = q^{-tau_r} for r = 0..R.
  std::vector<Rational> tau;
  // General approximation functions. Only the power subclass is supported,
  // so a nonempty list is rejected.
  std::vector<std::function<double(double)>> psi;
};

Rational hausdorff_dimension(int n, int R, const ApproximationProfile& profile);

enum class SeriesVerdict { converges, diverges };
std::string to_string(SeriesVerdict v);

// Decides convergence of sum_q q^n (psi_0(q)/q)^s prod_r psi_r(q) exactly.
SeriesVerdict khintchine_series_converges(int n, int R, const ApproximationProfile& profile, const Rational& s);
// n - s(tau_0 + 1) - sum_r tau_r, the exponent of q in the summand.
Rational khintchine_exponent(int n, const ApproximationProfile& profile, const Rational& s);

struct ExponentReport {
  int n = 0;
  int R = 0;
  Rational theta;
  Rational beta_st;
  Rational alpha_st;
  BetaSequence sequence;
  Rational delta_threshold_exponent;
  std::optional<ErrorFactorKind> error_factor;
  int radon_hurwitz = 0;
};

ExponentReport exponent_report(int n, int R, int max_steps);

}  // namespace rpnm

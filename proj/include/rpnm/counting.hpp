#pragma once

#include "rpnm/linalg.hpp"
#include "rpnm/manifold.hpp"
#include "rpnm/rational.hpp"
#include "rpnm/weight.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace rpnm {

// Closed sup-norm ball.
struct Ball {
  Vec center;
  double radius = 0.0;
};

// Per-codimension widths delta_r. Each delta_r lies in (0, 1/2]; the closed
// end 1/2 is allowed because it is the only width for which the sharp
// condition ||t|| <= delta_r is vacuous.
class DeltaVector {
 public:
  explicit DeltaVector(std::vector<double> deltas);

  int size() const { return static_cast<int>(deltas_.size()); }
  // 1-based, matching the codimension index r.
  double operator[](int r) const;
  const std::vector<double>& values() const { return deltas_; }

  double product() const;
  double product_except(int r) const;
  Rational product_exact() const;
  Rational product_except_exact(int r) const;
  // J_r = floor(1 / (2 delta_r)).
  long long selberg_degree(int r) const;

 private:
  std::vector<double> deltas_;
};

struct CountResult {
  double value = 0.0;
  // Exact integer value for the unweighted counts.
  std::optional<std::uint64_t> exact;
  long long Q = 0;
  std::vector<double> delta;
  double main_term = 0.0;
  std::chrono::duration<double> elapsed{};
  std::uint64_t enumerated = 0;
};

struct CountOptions {
  unsigned shards = 1;
};

enum class PencilKind { standard, big, dyadic };

// Index sets J^s(X) (standard), J^s_b(X) (big) and the dyadic J_l, where for
// the dyadic kind X is the level l. Indices are nonnegative except for the
// big kind, whose members may carry signs (|j|_inf <= 2 j_s, j_s > 0).
class PencilSet {
 public:
  PencilSet(int R, int s, long long X, PencilKind kind);

  int R() const { return R_; }
  int s() const { return s_; }
  long long X() const { return X_; }
  PencilKind kind() const { return kind_; }

  bool contains(const std::vector<long long>& j) const;
  // Members in lexicographic order.
  std::vector<std::vector<long long>> members() const;

 private:
  int R_;
  int s_;
  long long X_;
  PencilKind kind_;
};

// #{(a, q) : 1 <= q <= Q, a/q in domain, ||q f_r(a/q)|| <= delta_r for all r}.
CountResult count_sharp(const ManifoldSpec& spec, const Ball& domain, long long Q, const DeltaVector& delta,
                        CountOptions opts = {});

// Sum of w(a/q) over the pairs of count_sharp, with a/q ranging over supp w.
// main_term is prod(2 delta_r) times the base count, computed in the same pass.
CountResult count_smoothed(const ManifoldSpec& spec, const WeightFunction& w, long long Q,
                           const DeltaVector& delta, CountOptions opts = {});

struct BaseCount {
  CountResult result;        // value = sum_{q <= Q} sum_a w(a/q)
  double riemann_predictor;  // w_hat(0) * sum_{q <= Q} q^n
};

BaseCount base_count(const ManifoldSpec& spec, const WeightFunction& w, long long Q, CountOptions opts = {});

// Per-denominator partial sums of the base count, for q in [q_first, q_last].
// reduce_layers over a concatenation of consecutive ranges reproduces the
// single-range total exactly.
std::vector<double> base_count_layers(const ManifoldSpec& spec, const WeightFunction& w, long long q_first,
                                      long long q_last, CountOptions opts = {});
double reduce_layers(const std::vector<double>& layers);

// #{(a, q) : 1 <= q <= Q, a/q in domain, q f_r(a/q) an integer for all r},
// decided in exact integer arithmetic.
CountResult count_on_manifold(const ManifoldSpec& spec, const Ball& domain, long long Q, CountOptions opts = {});

// Dual-weight count: sum over j in J^s(Q*) and integer a with
// ||j_s F*(a/j_s)|| < delta* of w*(a/j_s) / sqrt|det H_F(preimage)|.
// main_term is 2 delta* times the same sum without the distance condition.
CountResult count_dual(const ManifoldSpec& spec, const WeightFunction& w, int s, long long Qstar,
                       double delta_star, CountOptions opts = {});

// prod_r (2 delta_r) * base count.
double main_term_predictor(const ManifoldSpec& spec, const WeightFunction& w, long long Q,
                           const DeltaVector& delta, CountOptions opts = {});

}  // namespace rpnm

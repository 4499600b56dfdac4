#include "rpnm/counting.hpp"

#include "rpnm/errors.hpp"
#include "rpnm/legendre.hpp"
#include "rpnm/parallel.hpp"
#include "rpnm/polynomial.hpp"
#include "rpnm/trig.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace rpnm {

// ---------------------------------------------------------------------------
// DeltaVector

DeltaVector::DeltaVector(std::vector<double> deltas) : deltas_(std::move(deltas)) {
  if (deltas_.empty()) throw ParameterError("delta vector must not be empty");
  for (double d : deltas_) {
    if (!(d > 0.0 && d <= 0.5)) throw ParameterError("each delta_r must lie in (0, 1/2]");
  }
}

double DeltaVector::operator[](int r) const {
  if (r < 1 || r > size()) throw IndexError("delta index out of range");
  return deltas_[r - 1];
}

double DeltaVector::product() const { return to_double(product_exact()); }

double DeltaVector::product_except(int r) const { return to_double(product_except_exact(r)); }

Rational DeltaVector::product_exact() const {
  Rational p = 1;
  for (double d : deltas_) p *= exact_rational(d);
  return p;
}

Rational DeltaVector::product_except_exact(int r) const {
  if (r < 1 || r > size()) throw IndexError("delta index out of range");
  Rational p = 1;
  for (int i = 1; i <= size(); ++i) {
    if (i != r) p *= exact_rational(deltas_[i - 1]);
  }
  return p;
}

long long DeltaVector::selberg_degree(int r) const {
  const Rational inv = Rational(1) / (2 * exact_rational((*this)[r]));
  return static_cast<long long>(BigInt(numerator(inv) / denominator(inv)));
}

// ---------------------------------------------------------------------------
// PencilSet

PencilSet::PencilSet(int R, int s, long long X, PencilKind kind) : R_(R), s_(s), X_(X), kind_(kind) {
  if (R < 1) throw ParameterError("R must be positive");
  if (s < 1 || s > R) throw IndexError("pencil index s out of range");
  if (X < 1) throw ParameterError("pencil bound must be positive");
  if (kind == PencilKind::dyadic && X > 40) throw CapacityError("dyadic level too large");
}

bool PencilSet::contains(const std::vector<long long>& j) const {
  if (static_cast<int>(j.size()) != R_) return false;
  long long sup = 0;
  bool nonnegative = true;
  for (long long v : j) {
    sup = std::max(sup, std::llabs(v));
    nonnegative = nonnegative && v >= 0;
  }
  const long long js = j[s_ - 1];
  switch (kind_) {
    case PencilKind::standard:
      return nonnegative && sup > 0 && sup == js && js <= X_;
    case PencilKind::big:
      return sup > 0 && sup <= 2 * js && js <= X_;
    case PencilKind::dyadic: {
      if (!nonnegative) return false;
      const long long top = 1LL << X_;
      if (js < top / 2 || js >= top) return false;
      for (int r = 0; r < R_; ++r) {
        if (r != s_ - 1 && j[r] > top) return false;
      }
      return true;
    }
  }
  return false;
}

std::vector<std::vector<long long>> PencilSet::members() const {
  // Candidate box per coordinate; contains() filters.
  long long lo = 0, hi = 0;
  switch (kind_) {
    case PencilKind::standard: lo = 0; hi = X_; break;
    case PencilKind::big: lo = -2 * X_; hi = 2 * X_; break;
    case PencilKind::dyadic: lo = 0; hi = 1LL << X_; break;
  }
  const long double span = static_cast<long double>(hi - lo + 1);
  if (std::pow(span, R_) > 1e8L) throw CapacityError("pencil set too large to enumerate");
  std::vector<std::vector<long long>> out;
  std::vector<long long> j(R_, lo);
  while (true) {
    if (contains(j)) out.push_back(j);
    int i = R_ - 1;
    while (i >= 0 && j[i] == hi) j[i--] = lo;
    if (i < 0) break;
    ++j[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration helpers

namespace {

using Clock = std::chrono::steady_clock;

struct IntBox {
  std::vector<long long> lo;
  std::vector<long long> hi;
  bool empty = false;
  long long max_abs = 0;
  std::uint64_t points = 0;
};

// Bounds are snapped to the nearest integer when within a relative 1e-9, so
// that decimal radii such as 0.3 keep their boundary lattice points.
long long snapped_ceil(double v) {
  const double r = std::nearbyint(v);
  if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v))) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(v));
}

long long snapped_floor(double v) {
  const double r = std::nearbyint(v);
  if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v))) return static_cast<long long>(r);
  return static_cast<long long>(std::floor(v));
}

IntBox scaled_box(const Vec& center, double radius, long long q) {
  IntBox box;
  const auto n = center.size();
  box.lo.resize(n);
  box.hi.resize(n);
  long double total = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = static_cast<double>(q) * (center[i] - radius);
    const double hi = static_cast<double>(q) * (center[i] + radius);
    if (std::fabs(lo) > 9e15 || std::fabs(hi) > 9e15) throw CapacityError("enumeration box exceeds 2^53");
    box.lo[i] = snapped_ceil(lo);
    box.hi[i] = snapped_floor(hi);
    if (box.hi[i] < box.lo[i]) box.empty = true;
    box.max_abs = std::max({box.max_abs, std::llabs(box.lo[i]), std::llabs(box.hi[i])});
    total *= static_cast<long double>(box.hi[i] - box.lo[i] + 1);
  }
  if (box.empty) return box;
  if (total > 9.2e18L) throw CapacityError("enumeration box exceeds 2^63 points");
  box.points = static_cast<std::uint64_t>(total);
  return box;
}

// Rejects denominator ranges whose combined enumeration exceeds 2^63 points,
// before any per-denominator storage is allocated.
void check_capacity(const Vec& center, double radius, long long q_first, long long q_last) {
  const IntBox last = scaled_box(center, radius, q_last);
  const long double bound = static_cast<long double>(q_last - q_first + 1) * static_cast<long double>(last.points);
  if (bound > 9.2e18L) throw CapacityError("enumeration over all denominators exceeds 2^63 points");
}

template <class Fn>
void for_each_point(const IntBox& box, Fn&& fn) {
  if (box.empty) return;
  const int n = static_cast<int>(box.lo.size());
  std::vector<long long> a = box.lo;
  while (true) {
    fn(std::span<const long long>(a));
    int i = n - 1;
    while (i >= 0 && a[i] == box.hi[i]) {
      a[i] = box.lo[i];
      --i;
    }
    if (i < 0) break;
    ++a[i];
  }
}

void check_domain(const ManifoldSpec& spec, const Vec& center, double radius) {
  if (center.size() != spec.n) throw ParameterError("domain has wrong dimension");
  if (!(radius >= 0.0)) throw ParameterError("domain radius must be nonnegative");
  if (sup_norm(center - spec.x0) + radius > kEvaluationRadiusFactor * spec.eps0) {
    throw DomainError("counting domain leaves the evaluation ball B_{4 eps0}(x0)");
  }
}

void check_Q(long long Q) {
  if (Q < 1) throw ParameterError("Q must be at least 1");
}

BigInt to_big(__int128 v) {
  const bool negative = v < 0;
  const unsigned __int128 u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return negative ? BigInt(-r) : r;
}

// A width delta taken at its exact binary value.
struct Threshold {
  double value;
  BigInt num;
  BigInt den;
};

Threshold threshold(double d) {
  const Rational r = exact_rational(d);
  return {d, numerator(r), denominator(r)};
}

bool compare(const BigInt& k, const BigInt& m, const Threshold& t, bool strict) {
  const BigInt lhs = k * t.den;
  const BigInt rhs = t.num * m;
  return strict ? lhs < rhs : lhs <= rhs;
}

constexpr double kHazard = 1e-9;

// Decides ||q f_r(a/q)|| <= delta_r for all r. With exact polynomials the
// decision is exact: the distance is k/M with integers k, M and only values
// within the hazard band of delta_r are compared in multiprecision.
class PrimalTester {
 public:
  PrimalTester(const ManifoldSpec& spec, const std::vector<double>& deltas) : spec_(spec) {
    for (double d : deltas) thresholds_.push_back(threshold(d));
    if (spec.exact_polys) {
      for (const auto& p : *spec.exact_polys) scaled_.emplace_back(p);
    }
  }

  bool exact() const { return !scaled_.empty(); }

  struct Layer {
    long long q = 0;
    std::vector<ScaledPolynomial::Layer> polys;
  };

  Layer layer(long long q, long long max_abs) const {
    Layer L;
    L.q = q;
    for (const auto& sp : scaled_) L.polys.push_back(sp.layer(q, std::max(max_abs, 1LL)));
    return L;
  }

  bool near(const Layer& L, std::span<const long long> a, std::span<const double> x) const {
    const int R = static_cast<int>(thresholds_.size());
    for (int r = 0; r < R; ++r) {
      const Threshold& t = thresholds_[r];
      if (exact()) {
        const auto& P = L.polys[r];
        if (P.fast()) {
          __int128 k = 0, m = 1;
          P.distance_fast(a, k, m);
          const double dist = static_cast<double>(k) / static_cast<double>(m);
          bool ok;
          if (std::fabs(dist - t.value) >= kHazard) {
            ok = dist <= t.value;
          } else {
            ok = compare(to_big(k), to_big(m), t, false);
          }
          if (!ok) return false;
        } else {
          const ExactDistance d = P.distance_exact(a);
          if (!compare(d.numerator, d.denominator, t, false)) return false;
        }
      } else {
        Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
        const double v = static_cast<double>(L.q) * evaluate(spec_, r + 1, xv).value;
        if (!(nearest_integer_distance(v) <= t.value)) return false;
      }
    }
    return true;
  }

  bool on_manifold(const Layer& L, std::span<const long long> a) const {
    for (const auto& P : L.polys) {
      if (!P.is_integer(a)) return false;
    }
    return true;
  }

 private:
  const ManifoldSpec& spec_;
  std::vector<Threshold> thresholds_;
  std::vector<ScaledPolynomial> scaled_;
};

struct Tally {
  std::uint64_t count = 0;
  std::uint64_t visited = 0;
  double weighted = 0.0;
  double base = 0.0;
};

Rational two_delta_product(const DeltaVector& delta) {
  Rational p = 1;
  for (double d : delta.values()) p *= 2 * exact_rational(d);
  return p;
}

void check_delta(const ManifoldSpec& spec, const DeltaVector& delta) {
  if (delta.size() != spec.R) throw ParameterError("delta vector must have R entries");
}

const std::vector<double>& to_coordinates(std::span<const long long> a, long long q, std::vector<double>& x) {
  for (std::size_t i = 0; i < a.size(); ++i) x[i] = static_cast<double>(a[i]) / static_cast<double>(q);
  return x;
}

// Per-axis profile values on an integer box, so that w(a/q) is a product of
// table lookups. The product is formed in the same order as WeightFunction::at,
// which makes the two bit-identical.
class AxisWeights {
 public:
  AxisWeights(const WeightFunction& w, const IntBox& box, long long q) : lo_(box.lo) {
    const int n = w.dimension();
    tables_.resize(n);
    for (int i = 0; i < n; ++i) {
      for (long long a = box.lo[i]; a <= box.hi[i]; ++a) {
        const double x = static_cast<double>(a) / static_cast<double>(q);
        tables_[i].push_back(w.profile_value((x - w.center()[i]) / w.radius()));
      }
    }
  }

  double operator()(std::span<const long long> a) const {
    double v = 1.0;
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      v *= tables_[i][static_cast<std::size_t>(a[i] - lo_[i])];
      if (v == 0.0) return 0.0;
    }
    return v;
  }

 private:
  std::vector<long long> lo_;
  std::vector<std::vector<double>> tables_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Primal counts

CountResult count_sharp(const ManifoldSpec& spec, const Ball& domain, long long Q, const DeltaVector& delta,
                        CountOptions opts) {
  const auto start = Clock::now();
  check_Q(Q);
  check_delta(spec, delta);
  check_domain(spec, domain.center, domain.radius);
  check_capacity(domain.center, domain.radius, 1, Q);
  const PrimalTester tester(spec, delta.values());

  auto tallies = parallel_map<Tally>(static_cast<std::size_t>(Q), opts.shards, [&](std::size_t i) {
    const long long q = static_cast<long long>(i) + 1;
    const IntBox box = scaled_box(domain.center, domain.radius, q);
    Tally t;
    t.visited = box.points;
    if (box.empty) return t;
    const auto L = tester.layer(q, box.max_abs);
    std::vector<double> x(spec.n);
    for_each_point(box, [&](std::span<const long long> a) {
      if (!tester.exact()) to_coordinates(a, q, x);
      if (tester.near(L, a, x)) ++t.count;
    });
    return t;
  });

  CountResult res;
  res.Q = Q;
  res.delta = delta.values();
  std::uint64_t count = 0;
  for (const auto& t : tallies) {
    count += t.count;
    res.enumerated += t.visited;
  }
  res.exact = count;
  res.value = static_cast<double>(count);
  res.main_term = to_double(two_delta_product(delta) * Rational(BigInt(res.enumerated)));
  res.elapsed = Clock::now() - start;
  return res;
}

CountResult count_smoothed(const ManifoldSpec& spec, const WeightFunction& w, long long Q,
                           const DeltaVector& delta, CountOptions opts) {
  const auto start = Clock::now();
  check_Q(Q);
  check_delta(spec, delta);
  check_domain(spec, w.center(), w.radius());
  check_capacity(w.center(), w.radius(), 1, Q);
  const PrimalTester tester(spec, delta.values());

  auto tallies = parallel_map<Tally>(static_cast<std::size_t>(Q), opts.shards, [&](std::size_t i) {
    const long long q = static_cast<long long>(i) + 1;
    const IntBox box = scaled_box(w.center(), w.radius(), q);
    Tally t;
    t.visited = box.points;
    if (box.empty) return t;
    const auto L = tester.layer(q, box.max_abs);
    std::vector<double> x(spec.n);
    const AxisWeights weights(w, box, q);
    CompensatedSum weighted, base;
    for_each_point(box, [&](std::span<const long long> a) {
      const double wx = weights(a);
      if (wx == 0.0) return;
      if (!tester.exact()) to_coordinates(a, q, x);
      base.add(wx);
      if (tester.near(L, a, x)) weighted.add(wx);
    });
    t.weighted = weighted.value();
    t.base = base.value();
    return t;
  });

  CountResult res;
  res.Q = Q;
  res.delta = delta.values();
  CompensatedSum weighted, base;
  for (const auto& t : tallies) {
    weighted.add(t.weighted);
    base.add(t.base);
    res.enumerated += t.visited;
  }
  res.value = weighted.value();
  res.main_term = to_double(two_delta_product(delta)) * base.value();
  res.elapsed = Clock::now() - start;
  return res;
}

std::vector<double> base_count_layers(const ManifoldSpec& spec, const WeightFunction& w, long long q_first,
                                      long long q_last, CountOptions opts) {
  if (q_first < 1 || q_last < q_first) throw ParameterError("invalid denominator range");
  check_domain(spec, w.center(), w.radius());
  check_capacity(w.center(), w.radius(), q_first, q_last);
  const auto count = static_cast<std::size_t>(q_last - q_first + 1);
  return parallel_map<double>(count, opts.shards, [&](std::size_t i) {
    const long long q = q_first + static_cast<long long>(i);
    const IntBox box = scaled_box(w.center(), w.radius(), q);
    if (box.empty) return 0.0;
    const AxisWeights weights(w, box, q);
    CompensatedSum sum;
    for_each_point(box, [&](std::span<const long long> a) { sum.add(weights(a)); });
    return sum.value();
  });
}

double reduce_layers(const std::vector<double>& layers) {
  CompensatedSum sum;
  for (double v : layers) sum.add(v);
  return sum.value();
}

BaseCount base_count(const ManifoldSpec& spec, const WeightFunction& w, long long Q, CountOptions opts) {
  const auto start = Clock::now();
  check_Q(Q);
  const auto layers = base_count_layers(spec, w, 1, Q, opts);
  BaseCount out;
  out.result.Q = Q;
  out.result.value = reduce_layers(layers);
  out.result.main_term = out.result.value;
  for (long long q = 1; q <= Q; ++q) {
    out.result.enumerated += scaled_box(w.center(), w.radius(), q).points;
  }
  long double powers = 0;
  for (long long q = 1; q <= Q; ++q) powers += std::pow(static_cast<long double>(q), spec.n);
  out.riemann_predictor = static_cast<double>(static_cast<long double>(w.w_hat_zero()) * powers);
  out.result.elapsed = Clock::now() - start;
  return out;
}

CountResult count_on_manifold(const ManifoldSpec& spec, const Ball& domain, long long Q, CountOptions opts) {
  const auto start = Clock::now();
  check_Q(Q);
  if (!spec.exact_polys) throw UnsupportedError("on-manifold counting needs exact polynomials");
  check_domain(spec, domain.center, domain.radius);
  check_capacity(domain.center, domain.radius, 1, Q);
  const PrimalTester tester(spec, std::vector<double>(spec.R, 0.5));

  auto tallies = parallel_map<Tally>(static_cast<std::size_t>(Q), opts.shards, [&](std::size_t i) {
    const long long q = static_cast<long long>(i) + 1;
    const IntBox box = scaled_box(domain.center, domain.radius, q);
    Tally t;
    t.visited = box.points;
    if (box.empty) return t;
    const auto L = tester.layer(q, box.max_abs);
    for_each_point(box, [&](std::span<const long long> a) {
      if (tester.on_manifold(L, a)) ++t.count;
    });
    return t;
  });

  CountResult res;
  res.Q = Q;
  res.delta.assign(spec.R, 0.0);
  std::uint64_t count = 0;
  for (const auto& t : tallies) {
    count += t.count;
    res.enumerated += t.visited;
  }
  res.exact = count;
  res.value = static_cast<double>(count);
  res.elapsed = Clock::now() - start;
  return res;
}

double main_term_predictor(const ManifoldSpec& spec, const WeightFunction& w, long long Q,
                           const DeltaVector& delta, CountOptions opts) {
  check_delta(spec, delta);
  return to_double(two_delta_product(delta)) * base_count(spec, w, Q, opts).result.value;
}

// ---------------------------------------------------------------------------
// Dual count

namespace {

// F(x) = 1/2 x^T A x + b.x + c with exact coefficients, and its conjugate
// F*(y) = 1/2 (y - b)^T A^{-1} (y - b) - c.
struct ExactQuadratic {
  int n = 0;
  std::vector<std::vector<Rational>> Ainv;
  std::vector<Rational> b;
  Rational c;

  // j F*(a / j) as an exact rational.
  Rational scaled_conjugate(std::span<const long long> a, long long j) const {
    std::vector<Rational> u(n);
    for (int i = 0; i < n; ++i) u[i] = Rational(BigInt(a[i]), BigInt(j)) - b[i];
    Rational quad = 0;
    for (int i = 0; i < n; ++i) {
      Rational row = 0;
      for (int k = 0; k < n; ++k) row += Ainv[i][k] * u[k];
      quad += u[i] * row;
    }
    return Rational(j) * (quad / 2 - c);
  }
};

std::optional<ExactQuadratic> exact_quadratic(const PencilFunction& F) {
  const auto poly = F.exact();
  if (!poly || poly->degree() > 2) return std::nullopt;
  const int n = F.dimension();
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n, Rational(0)));
  ExactQuadratic Qd;
  Qd.n = n;
  Qd.b.assign(n, Rational(0));
  Qd.c = 0;
  for (const auto& m : poly->terms()) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < m.exponents[i]; ++e) idx.push_back(i);
    }
    if (idx.empty()) {
      Qd.c += m.coefficient;
    } else if (idx.size() == 1) {
      Qd.b[idx[0]] += m.coefficient;
    } else if (idx[0] == idx[1]) {
      A[idx[0]][idx[0]] += 2 * m.coefficient;
    } else {
      A[idx[0]][idx[1]] += m.coefficient;
      A[idx[1]][idx[0]] += m.coefficient;
    }
  }
  // Gauss-Jordan inversion over the rationals.
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (A[r][col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    std::swap(A[col], A[pivot]);
    std::swap(inv[col], inv[pivot]);
    const Rational p = A[col][col];
    for (int k = 0; k < n; ++k) {
      A[col][k] /= p;
      inv[col][k] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      const Rational f = A[r][col];
      for (int k = 0; k < n; ++k) {
        A[r][k] -= f * A[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  Qd.Ainv = std::move(inv);
  return Qd;
}

Rational exact_distance(const Rational& v) {
  const BigInt fl = [&] {
    BigInt q = numerator(v) / denominator(v);
    if (q * denominator(v) > numerator(v)) --q;
    return q;
  }();
  const Rational frac = v - Rational(fl);
  return frac <= Rational(1, 2) ? frac : Rational(1) - frac;
}

struct DualTally {
  double weighted = 0.0;
  double base = 0.0;
  std::uint64_t visited = 0;
};

}  // namespace

CountResult count_dual(const ManifoldSpec& spec, const WeightFunction& w, int s, long long Qstar,
                       double delta_star, CountOptions opts) {
  const auto start = Clock::now();
  check_Q(Qstar);
  if (!(delta_star > 0.0 && delta_star < 0.5)) throw ParameterError("delta* must lie in (0, 1/2)");
  if (s < 1 || s > spec.R) throw IndexError("codimension index s out of range");
  check_domain(spec, w.center(), w.radius());
  const Threshold t = threshold(delta_star);
  const Rational t_exact = exact_rational(delta_star);

  // Envelope of the dual supports: grad F_j is affine in the ratios j_r/j_s in
  // [0, 1], so the corner pencils bound every member.
  Box envelope;
  {
    const int corners = 1 << (spec.R - 1);
    for (int mask = 0; mask < corners; ++mask) {
      std::vector<long long> j(spec.R, 0);
      j[s - 1] = 1;
      int bit = 0;
      for (int r = 0; r < spec.R; ++r) {
        if (r == s - 1) continue;
        j[r] = (mask >> bit++) & 1;
      }
      const Box b = DualFamily(pencil_function(spec, s, j, {}), w).support_box();
      if (mask == 0) {
        envelope = b;
      } else {
        envelope.lo = envelope.lo.cwiseMin(b.lo);
        envelope.hi = envelope.hi.cwiseMax(b.hi);
      }
    }
  }
  const Vec env_center = (envelope.lo + envelope.hi) / 2;
  const Vec env_half = (envelope.hi - envelope.lo) / 2;

  const auto pencils = PencilSet(spec.R, s, Qstar, PencilKind::standard).members();
  auto tallies = parallel_map<DualTally>(pencils.size(), opts.shards, [&](std::size_t idx) {
    const auto& j = pencils[idx];
    const long long js = j[s - 1];
    const DualFamily fam(pencil_function(spec, s, j, {}), w);
    const auto quad = exact_quadratic(fam.function());
    IntBox box;
    box.lo.resize(spec.n);
    box.hi.resize(spec.n);
    long double total = 1;
    for (int i = 0; i < spec.n; ++i) {
      box.lo[i] = static_cast<long long>(std::ceil(js * (env_center[i] - env_half[i])));
      box.hi[i] = static_cast<long long>(std::floor(js * (env_center[i] + env_half[i])));
      if (box.hi[i] < box.lo[i]) box.empty = true;
      total *= static_cast<long double>(box.hi[i] - box.lo[i] + 1);
    }
    DualTally tally;
    if (box.empty) return tally;
    if (total > 9.2e18L) throw CapacityError("dual enumeration box exceeds 2^63 points");
    tally.visited = static_cast<std::uint64_t>(total);
    CompensatedSum weighted, base;
    Vec y(spec.n);
    for_each_point(box, [&](std::span<const long long> a) {
      for (int i = 0; i < spec.n; ++i) y[i] = static_cast<double>(a[i]) / static_cast<double>(js);
      Vec x;
      try {
        x = fam.invert_gradient(y);
      } catch (const Error&) {
        return;  // outside R_j: zero dual weight
      }
      const double wx = w(x);
      if (wx == 0.0) return;
      const Jet J = fam.function().jet(x);
      const double term = wx / std::sqrt(std::fabs(J.hessian.determinant()));
      base.add(term);
      const double v = static_cast<double>(js) * (y.dot(x) - J.value);
      const double dist = nearest_integer_distance(v);
      bool ok;
      if (quad && std::fabs(dist - t.value) < kHazard) {
        ok = exact_distance(quad->scaled_conjugate(a, js)) < t_exact;
      } else {
        ok = dist < t.value;
      }
      if (ok) weighted.add(term);
    });
    tally.weighted = weighted.value();
    tally.base = base.value();
    return tally;
  });

  CountResult res;
  res.Q = Qstar;
  res.delta = {delta_star};
  CompensatedSum weighted, base;
  for (const auto& tl : tallies) {
    weighted.add(tl.weighted);
    base.add(tl.base);
    res.enumerated += tl.visited;
  }
  res.value = weighted.value();
  res.main_term = 2 * delta_star * base.value();
  res.elapsed = Clock::now() - start;
  return res;
}

}  // namespace rpnm

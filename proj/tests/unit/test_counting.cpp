#include "oracle/naive.hpp"
#include "rpnm/counting.hpp"
#include "rpnm/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

using namespace rpnm;

namespace {

Vec origin() { return Vec::Zero(2); }

ManifoldSpec spec_for(oracle::Family f) {
  return f == oracle::Family::paraboloid ? make_paraboloid(2, origin(), 0.5) : make_complex_squaring(origin(), 0.5);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

const std::vector<double> kDeltaPool = {0.5, 0.375, 0.25, 0.2, 0.125, 0.1, 0.05, 0.03125, 0.01, 0.4999999999999990};

}  // namespace

TEST_CASE("delta vector validation") {
  CHECK_THROWS_AS(DeltaVector({}), ParameterError);
  CHECK_THROWS_AS(DeltaVector({0.0}), ParameterError);
  CHECK_THROWS_AS(DeltaVector({0.6}), ParameterError);
  CHECK_NOTHROW(DeltaVector({0.5}));
  const DeltaVector d({0.25, 0.1});
  CHECK(d[1] == 0.25);
  CHECK_THROWS_AS(d[3], IndexError);
  CHECK(d.product() == doctest::Approx(0.025));
  CHECK(d.product_except(1) == 0.1);
  CHECK(d.selberg_degree(1) == 2);
  // 0.1 is slightly above 1/10 in binary, so 1/(2 delta) is just below 5.
  CHECK(d.selberg_degree(2) == 4);
  CHECK(DeltaVector({0.125}).selberg_degree(1) == 4);
  CHECK(d.product_exact() == exact_rational(0.25) * exact_rational(0.1));
}

TEST_CASE("sharp, smoothed and on-manifold counts agree with the naive oracle") {
  std::mt19937_64 rng(20261015);
  for (auto fam : {oracle::Family::paraboloid, oracle::Family::complex_squaring}) {
    const auto spec = spec_for(fam);
    const WeightFunction w(origin(), 0.5);
    const Ball dom{origin(), 0.5};
    for (long long Q : {1LL, 7LL, 16LL}) {
      const auto pts = oracle::enumerate(fam, Q, oracle::Rat(1, 2), 0.5);
      CHECK(count_on_manifold(spec, dom, Q).exact.value() == oracle::on_manifold(pts));
      for (int trial = 0; trial < 12; ++trial) {
        std::vector<double> delta;
        for (int r = 0; r < spec.R; ++r) delta.push_back(kDeltaPool[rng() % kDeltaPool.size()]);
        const DeltaVector dv(delta);
        const auto sharp = count_sharp(spec, dom, Q, dv);
        CHECK(sharp.exact.value() == oracle::sharp(pts, delta));
        CHECK(sharp.value == static_cast<double>(*sharp.exact));
        const auto sm = count_smoothed(spec, w, Q, dv);
        const double want = oracle::smoothed(pts, delta);
        CHECK(std::fabs(sm.value - want) <= 1e-12 * std::max(1.0, want));
      }
    }
  }
}

TEST_CASE("box bounds snap to the intended rational radius") {
  const auto spec = make_paraboloid(2, origin(), 0.5);
  const auto pts = oracle::enumerate(oracle::Family::paraboloid, 20, oracle::Rat(3, 10), 0.5);
  const auto got = count_sharp(spec, Ball{origin(), 0.3}, 20, DeltaVector({0.5}));
  CHECK(got.exact.value() == pts.size());
  CHECK(count_sharp(spec, Ball{origin(), 0.3}, 20, DeltaVector({0.125})).exact.value() ==
        oracle::sharp(pts, {0.125}));
}

TEST_CASE("delta = 1/2 is vacuous and strictly below it is not") {
  const auto spec = make_paraboloid(2, origin(), 0.5);
  const Ball dom{origin(), 0.5};
  const long long Q = 12;
  const auto pts = oracle::enumerate(oracle::Family::paraboloid, Q, oracle::Rat(1, 2), 0.5);
  std::uint64_t halves = 0;
  for (const auto& p : pts) halves += p.distance[0] == oracle::Rat(1, 2) ? 1 : 0;
  REQUIRE(halves > 0);
  const auto full = count_sharp(spec, dom, Q, DeltaVector({0.5}));
  const auto below = count_sharp(spec, dom, Q, DeltaVector({0.5 - 1e-15}));
  CHECK(*full.exact == pts.size());
  CHECK(*full.exact - *below.exact == halves);
  CHECK(full.main_term == doctest::Approx(static_cast<double>(pts.size())));
}

TEST_CASE("dual count agrees with the naive oracle") {
  for (auto fam : {oracle::Family::paraboloid, oracle::Family::complex_squaring}) {
    const auto spec = spec_for(fam);
    const WeightFunction w(origin(), 0.5);
    const long long Qstar = 9;
    const auto pts = oracle::enumerate_dual(fam, Qstar, 0.5);
    for (double ds : {0.25, 0.1, 0.05, 0.01, 0.125}) {
      const auto got = count_dual(spec, w, 1, Qstar, ds);
      const double want = oracle::dual(pts, ds);
      CHECK(std::fabs(got.value - want) <= 1e-9 * std::max(1.0, want));
    }
  }
  CHECK_THROWS_AS(count_dual(make_paraboloid(2, origin(), 0.5), WeightFunction(origin(), 0.5), 1, 4, 0.5),
                  ParameterError);
}

TEST_CASE("monotonicity and ordering between counts") {
  const auto spec = make_complex_squaring(origin(), 0.5);
  const Ball dom{origin(), 0.5};
  const WeightFunction w(origin(), 0.5);
  std::uint64_t prev = 0;
  for (double d : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
    const auto c = count_sharp(spec, dom, 24, DeltaVector({d, d}));
    CHECK(*c.exact >= prev);
    prev = *c.exact;
    CHECK(count_smoothed(spec, w, 24, DeltaVector({d, d})).value <= static_cast<double>(*c.exact));
    CHECK(*count_on_manifold(spec, dom, 24).exact <= *c.exact);
  }
  std::uint64_t by_q = 0;
  for (long long Q : {4LL, 8LL, 16LL, 32LL}) {
    const auto c = count_sharp(spec, dom, Q, DeltaVector({0.1, 0.1}));
    CHECK(*c.exact >= by_q);
    by_q = *c.exact;
  }
}

TEST_CASE("results do not depend on the shard count") {
  const auto spec = make_complex_squaring(origin(), 0.5);
  const WeightFunction w(origin(), 0.5);
  const DeltaVector dv({0.1, 0.2});
  const auto base = count_smoothed(spec, w, 60, dv, {1});
  const auto dual1 = count_dual(spec, w, 1, 10, 0.1, {1});
  for (unsigned shards : {2u, 8u}) {
    const auto other = count_smoothed(spec, w, 60, dv, {shards});
    CHECK(same_bits(base.value, other.value));
    CHECK(same_bits(base.main_term, other.main_term));
    CHECK(count_sharp(spec, Ball{origin(), 0.5}, 60, dv, {shards}).exact ==
          count_sharp(spec, Ball{origin(), 0.5}, 60, dv, {1}).exact);
    CHECK(same_bits(count_dual(spec, w, 1, 10, 0.1, {shards}).value, dual1.value));
  }
}

TEST_CASE("base count layers are additive") {
  const auto spec = make_paraboloid(2, origin(), 0.5);
  const WeightFunction w(origin(), 0.5);
  const auto whole = base_count_layers(spec, w, 1, 40);
  auto split = base_count_layers(spec, w, 1, 17);
  const auto tail = base_count_layers(spec, w, 18, 40);
  split.insert(split.end(), tail.begin(), tail.end());
  CHECK(same_bits(reduce_layers(whole), reduce_layers(split)));
  const auto bc = base_count(spec, w, 40);
  CHECK(bc.result.value == doctest::Approx(reduce_layers(whole)).epsilon(1e-14));
  CHECK(bc.result.value / bc.riemann_predictor == doctest::Approx(1.0).epsilon(0.1));
  CHECK_THROWS_AS(base_count_layers(spec, w, 5, 4), ParameterError);
}

TEST_CASE("main-term predictor") {
  const WeightFunction w(origin(), 0.5);
  const auto para = make_paraboloid(2, origin(), 0.5);
  const double base = base_count(para, w, 30).result.value;
  CHECK(main_term_predictor(para, w, 30, DeltaVector({0.25})) == doctest::Approx(0.5 * base));
  CHECK(main_term_predictor(para, w, 30, DeltaVector({0.125})) == doctest::Approx(0.25 * base));
  CHECK(main_term_predictor(para, w, 30, DeltaVector({0.2})) /
            main_term_predictor(para, w, 30, DeltaVector({0.1})) ==
        doctest::Approx(2.0));
  const auto cs = make_complex_squaring(origin(), 0.5);
  CHECK(main_term_predictor(cs, w, 30, DeltaVector({0.25, 0.25})) ==
        doctest::Approx(0.25 * base_count(cs, w, 30).result.value));
  const auto sm = count_smoothed(para, w, 30, DeltaVector({0.25}));
  CHECK(sm.main_term == doctest::Approx(0.5 * base));
}

TEST_CASE("pencil sets") {
  SUBCASE("standard sets partition into dyadic levels") {
    const PencilSet all(2, 1, 15, PencilKind::standard);
    std::size_t total = 0;
    for (long long l = 1; l <= 4; ++l) {
      for (const auto& j : PencilSet(2, 1, l, PencilKind::dyadic).members()) {
        if (j[1] <= j[0]) {
          CHECK(all.contains(j));
          ++total;
        }
      }
    }
    CHECK(total == all.members().size());
  }
  SUBCASE("membership rules") {
    const PencilSet st(3, 2, 5, PencilKind::standard);
    CHECK(st.contains({1, 5, 0}));
    CHECK_FALSE(st.contains({6, 5, 0}));
    CHECK_FALSE(st.contains({0, 6, 6}));
    const PencilSet big(2, 1, 4, PencilKind::big);
    CHECK(big.contains({3, -6}));
    CHECK_FALSE(big.contains({3, 7}));
    CHECK_FALSE(big.contains({-1, 0}));
    const auto members = PencilSet(2, 1, 3, PencilKind::standard).members();
    CHECK(members.size() == 2 + 3 + 4);  // j1 = 1, 2, 3 with 0 <= j2 <= j1
    CHECK(std::is_sorted(members.begin(), members.end()));
  }
  CHECK_THROWS_AS(PencilSet(2, 3, 4, PencilKind::standard), IndexError);
  CHECK_THROWS_AS(PencilSet(2, 1, 0, PencilKind::standard), ParameterError);
}

TEST_CASE("counting errors") {
  const auto spec = make_paraboloid(2, origin(), 0.5);
  CHECK_THROWS_AS(count_sharp(spec, Ball{origin(), 2.5}, 4, DeltaVector({0.1})), DomainError);
  CHECK_THROWS_AS(count_sharp(spec, Ball{origin(), 0.5}, 0, DeltaVector({0.1})), ParameterError);
  CHECK_THROWS_AS(count_sharp(spec, Ball{origin(), 0.5}, 4, DeltaVector({0.1, 0.1})), ParameterError);
  CHECK_THROWS_AS(count_sharp(spec, Ball{origin(), 0.5}, 4'000'000'000LL, DeltaVector({0.1})), CapacityError);
  auto no_poly = make_diag_quadric({rational(1), rational(2)}, origin(), 0.5);
  no_poly.exact_polys.reset();
  CHECK_THROWS_AS(count_on_manifold(no_poly, Ball{origin(), 0.5}, 4), UnsupportedError);
}

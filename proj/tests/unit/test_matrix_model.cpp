#include "doctest.h"

#include "rmxs/errors.hpp"
#include "rmxs/linalg.hpp"
#include "rmxs/matrix_model.hpp"
#include "rmxs/ortho.hpp"
#include "rmxs/quadrature.hpp"

#include <cmath>

using namespace rmxs;

namespace {

Rational q(const char* s) { return parse_rational(s); }

double rel_diff(const Real& a, const Real& b) {
  const double sa = std::fabs(static_cast<double>(a));
  const double sb = std::fabs(static_cast<double>(b));
  return std::fabs(static_cast<double>(a - b)) / std::max({sa, sb, 1e-300});
}

SourceModel model(int d, std::vector<const char*> a, Weight w = Weight::gaussian()) {
  SourceModel m{d, {}, std::move(w)};
  for (const char* x : a) m.sources.push_back({q(x), 1});
  return m;
}

const IntervalSet kTail = parse_interval_set("[1,inf)");

}  // namespace

TEST_CASE("Z_1 for the Gaussian weight completes the square") {
  const Real z0 = partition_fn(model(1, {})).value;
  for (const char* a : {"1/2", "-3/4", "3/2"}) {
    const double ad = to_double(q(a));
    const Real z = partition_fn(model(1, {a})).value;
    CHECK(rel_diff(z / z0, Real(std::exp(ad * ad / 2))) < 1e-14);
  }
}

TEST_CASE("all-zero sources reduce to the Hankel determinant of moments") {
  for (int d = 1; d <= 5; ++d) {
    DenseMatrix<Rational> h(static_cast<std::size_t>(d), static_cast<std::size_t>(d), Rational(0));
    for (int p = 0; p < d; ++p)
      for (int r = 0; r < d; ++r) h(static_cast<std::size_t>(p), static_cast<std::size_t>(r)) = exact_moment(Weight::laguerre(), p + r);
    Rational expect = factorial_rational(d) * det_exact(h);
    // Column p of the Andreief matrix carries x^p / p!.
    for (int p = 0; p < d; ++p) expect /= factorial_rational(p);
    const Real z = partition_fn(model(d, {}, Weight::laguerre())).value;
    CHECK(rel_diff(z, to_real(expect)) < 1e-30);
  }
}

TEST_CASE("partition function is exactly symmetric in the sources") {
  const Real a = partition_fn(model(4, {"3/10", "9/10", "7/5"})).value;
  const Real b = partition_fn(model(4, {"7/5", "3/10", "9/10"})).value;
  CHECK(a == b);
  ExpectationQuery q1{model(4, {"3/10", "9/10"}), kTail, 1};
  ExpectationQuery q2{model(4, {"9/10", "3/10"}), kTail, 1};
  CHECK(normalized_expectation(q1).value == normalized_expectation(q2).value);
}

TEST_CASE("rank-1 partition function matches Andreief up to an a-independent factor") {
  for (int l : {1, 3, 5}) {
    std::vector<Real> ratios;
    for (const char* a : {"3/10", "7/10", "11/10"})
      ratios.push_back(rank1_partition_fn(Weight::gaussian(), l, q(a)).value / partition_fn(model(l, {a})).value);
    CHECK(rel_diff(ratios[0], ratios[1]) < 1e-8);
    CHECK(rel_diff(ratios[0], ratios[2]) < 1e-8);
  }
  // l = 1: Gamma_0(a) is e^{a^2/2} up to the normalization of pi_0.
  const Real g = rank1_partition_fn(Weight::gaussian(), 1, q("1/2")).value;
  const Real g0 = rank1_partition_fn(Weight::gaussian(), 1, q("1/1000")).value;
  CHECK(rel_diff(g / g0, Real(std::exp(0.125 - 0.0000005))) < 1e-12);
  CHECK_THROWS_AS(rank1_partition_fn(Weight::gaussian(), 2, Rational(0)), PreconditionError);
}

TEST_CASE("rank-1 quantities stay finite as a tends to 0") {
  for (int l = 2; l <= 6; ++l) {
    const Real small = rank1_partition_fn(Weight::gaussian(), l, q("1/1000")).value;
    const Real smaller = rank1_partition_fn(Weight::gaussian(), l, q("1/100000")).value;
    CHECK(std::isfinite(static_cast<double>(small)));
    CHECK(rel_diff(small, smaller) < 1e-5);
    CHECK(rel_diff(rank1_ratio(Weight::gaussian(), l, q("1/100000")).value, Real(1)) < 1e-8);
  }
}

TEST_CASE("rank-1 ladder ratio agrees with the Andreief ratio") {
  for (const Weight& w : {Weight::gaussian(), Weight::laguerre(), deform_weight(Weight::gaussian(), kTail, Rational(1))}) {
    for (int l = 1; l <= 6; ++l) {
      const Real andreief = partition_fn(model(l, {"9/10"}, w)).value / partition_fn(model(l, {}, w)).value;
      CHECK(rel_diff(rank1_ratio(w, l, q("9/10")).value, andreief) < 1e-20);
    }
  }
}

TEST_CASE("expectation special cases") {
  SUBCASE("s = 0 gives 1") {
    ExpectationQuery e{model(3, {"1/2"}), kTail, 0};
    CHECK(expectation(e).value == 1);
  }
  SUBCASE("E = R, s = 1 gives 0") {
    ExpectationQuery e{model(3, {"1/2"}), IntervalSet::real_line(), 1};
    CHECK(expectation(e).value == 0);
    CHECK_THROWS_AS(normalized_expectation(e), PreconditionError);
  }
  SUBCASE("one eigenvalue, symmetric law") {
    ExpectationQuery e{model(1, {}), parse_interval_set("[0,inf)"), 1};
    CHECK(rel_diff(expectation(e).value, Real(0.5)) < 1e-25);
  }
  SUBCASE("normalized expectation is 1 without sources or deformation") {
    ExpectationQuery e{model(4, {}), kTail, 1};
    CHECK(normalized_expectation(e).value == 1);
    ExpectationQuery f{model(4, {"1/2", "1"}), kTail, 0};
    CHECK(normalized_expectation(f).value == 1);
  }
}

TEST_CASE("d = 1 expectation is affine in s") {
  // E_1(a; E; s) = 1 - s * int_E e^{a x} W / int e^{a x} W.
  const Real full = integrate(Weight::gaussian(), [](const Real& x) { return exp(Real(0.7) * x); }, 1e-30,
                              GrowthHint{0, 0.7, {}}).value;
  const Real tail = integrate(deform_weight(Weight::gaussian(), IntervalSet::real_line(), Rational(0)),
                              [](const Real& x) { return x >= 1 ? exp(Real(0.7) * x) : Real(0); }, 1e-30,
                              GrowthHint{0, 0.7, {}}, {1.0})
                        .value;
  std::vector<Real> v;
  for (const char* s : {"1/4", "1/2", "3/2"}) {
    v.push_back(expectation({model(1, {"7/10"}), kTail, q(s)}).value);
    CHECK(rel_diff(v.back(), 1 - to_real(q(s)) * tail / full) < 1e-15);
  }
  // Collinear in s: (v1 - v0)/(1/4) == (v2 - v1)/1.
  CHECK(rel_diff((v[1] - v[0]) * 4, v[2] - v[1]) < 1e-20);
}

TEST_CASE("confluent sources are the limit of nearby distinct sources") {
  SourceModel merged{3, {{q("1/2"), 2}}, Weight::gaussian()};
  const Real target = partition_fn(merged).value;
  double prev = 1;
  for (const char* eps : {"1/100", "1/1000", "1/10000"}) {
    SourceModel near{3, {{q("1/2"), 1}, {q("1/2") + q(eps), 1}}, Weight::gaussian()};
    const double err = rel_diff(partition_fn(near).value, target);
    CHECK(err < prev / 5);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(partition_fn(model(2, {"1/2", "1/2"})), PreconditionError);
  CHECK_THROWS_AS(partition_fn(model(1, {"1/2", "1"})), PreconditionError);
  CHECK_THROWS_AS(partition_fn(model(2, {"0"})), PreconditionError);
  CHECK_THROWS_AS(partition_fn(model(11, {})), PreconditionError);
  CHECK_THROWS_AS(partition_fn(model(2, {"1"}, Weight::laguerre())), PreconditionError);
  CHECK_NOTHROW(partition_fn(model(2, {"1/2"}, Weight::laguerre())));
  SourceModel close{3, {{q("1/2"), 1}, {q("1/2") + q("1/10000000000"), 1}}, Weight::gaussian()};
  CHECK_THROWS_AS(partition_fn(close), NearConfluent);
  ExpectationQuery cq{close, kTail, 1};
  CHECK_THROWS_AS(verify_main_identity(cq), NearConfluent);
}

TEST_CASE("rank reduction: trivial cases") {
  ExpectationQuery one{model(5, {"9/10"}), kTail, 1};
  CHECK(verify_main_identity(one).rel_err < 1e-20);
  ExpectationQuery none{model(5, {"1/2", "9/10"}), kTail, 0};
  CHECK(rank_reduction_rhs(none).value == 1);
}

TEST_CASE("rank reduction: d = 3, two sources, gap probability") {
  ExpectationQuery e{model(3, {"1/2", "1"}), kTail, 1};
  const IdentityReport r = verify_main_identity(e);
  CHECK(r.rel_err < 1e-8);
  CHECK(r.rel_err < 1e-20);
  CHECK(r.min_gap == doctest::Approx(0.5));
  CHECK(r.det_magnitude > 0);
}

TEST_CASE("rank reduction across weights, regions and s") {
  const Weight lag = Weight::laguerre();
  for (const char* region : {"[1,inf)", "[-1,1]"})
    for (const char* s : {"1/2", "1", "3/2"}) {
      ExpectationQuery g{model(6, {"3/10", "9/10", "7/5"}), parse_interval_set(region), q(s)};
      CHECK(verify_main_identity(g).rel_err < 1e-15);
      ExpectationQuery l{model(5, {"3/10", "1/2", "9/10"}, lag), parse_interval_set(region), q(s)};
      CHECK(verify_main_identity(l).rel_err < 1e-15);
    }
}

TEST_CASE("z-ratio determinant") {
  const IdentityReport r = z_ratio_det_check(Weight::gaussian(), 4, {q("2/5"), q("9/10")});
  CHECK(r.rel_err < 1e-8);
  const IdentityReport swapped = z_ratio_det_check(Weight::gaussian(), 4, {q("9/10"), q("2/5")});
  CHECK(r.rhs == swapped.rhs);
  CHECK(r.lhs == swapped.lhs);
  const IdentityReport single = z_ratio_det_check(Weight::gaussian(), 4, {q("9/10")});
  CHECK(single.rel_err < 1e-25);
  const Weight deformed = deform_weight(Weight::laguerre(), parse_interval_set("[-1,1]"), q("1/2"));
  CHECK(z_ratio_det_check(deformed, 7, {q("3/10"), q("1/2"), q("9/10")}).rel_err < 1e-15);
}

TEST_CASE("a corrupted deformed moment breaks the identity") {
  ExpectationQuery e{model(4, {"1/2", "9/10"}), kTail, 1};
  ModelOptions bad;
  bad.corrupt_deformed_moment = true;
  CHECK(verify_main_identity(e, bad).rel_err > 1e-3);
  CHECK(verify_main_identity(e).rel_err < 1e-15);
}

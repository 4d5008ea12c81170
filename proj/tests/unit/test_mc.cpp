#include "doctest.h"

#include "rmxs/errors.hpp"
#include "rmxs/mc.hpp"

#include <cmath>

using namespace rmxs;

namespace {

Rational q(const char* s) { return parse_rational(s); }

SourceModel gaussian(int d, std::vector<const char*> a) {
  SourceModel m{d, {}, Weight::gaussian()};
  for (const char* x : a) m.sources.push_back({q(x), 1});
  return m;
}

}  // namespace

TEST_CASE("one eigenvalue is a shifted standard normal") {
  std::mt19937_64 rng(11);
  const int n = 40000;
  for (double mu : {0.0, 0.8}) {
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_spiked_eigenvalues(1, mu == 0.0 ? std::vector<double>{} : std::vector<double>{mu}, rng)[0];
      sum += x;
      sum_sq += x * x;
    }
    CHECK(std::fabs(sum / n - mu) < 3.0 / std::sqrt(n));
    CHECK(std::fabs(sum_sq / n - sum * sum / n / n - 1.0) < 0.05);
  }
}

TEST_CASE("trace moments of the 2x2 ensemble") {
  std::mt19937_64 rng(5);
  const int n = 40000;
  double tr = 0, tr2 = 0;
  for (int i = 0; i < n; ++i) {
    const auto ev = sample_spiked_eigenvalues(2, {}, rng);
    tr += ev[0] + ev[1];
    tr2 += ev[0] * ev[0] + ev[1] * ev[1];
  }
  // Tr H ~ N(0, 2); Tr H^2 has mean d^2 = 4 and variance 8.
  CHECK(std::fabs(tr / n) < 3.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(tr2 / n - 4.0) < 3.0 * std::sqrt(8.0 / n));
}

TEST_CASE("exact special cases") {
  McOptions o;
  o.N = 2000;
  o.seed = 3;
  const auto e = estimate_expectations(gaussian(3, {"1/2"}), {{parse_interval_set("[1,inf)"), 0}, {IntervalSet::real_line(), 1}}, o);
  CHECK(e[0].mean == 1.0);
  CHECK(e[0].stderr_ == 0.0);
  CHECK(e[1].mean == 0.0);
  CHECK(compare(e[0], 1.0).z == 0.0);
  CHECK(compare(e[0], 0.5).z == std::numeric_limits<double>::infinity());
}

TEST_CASE("seed determinism and worker independence") {
  McOptions o;
  o.N = 20000;
  o.seed = 99;
  const IntervalSet e = parse_interval_set("[-1,1]");
  const auto a = estimate_expectation(gaussian(3, {"1/2", "1"}), e, q("1/2"), o);
  o.workers = 3;
  const auto b = estimate_expectation(gaussian(3, {"1/2", "1"}), e, q("1/2"), o);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  o.seed = 100;
  CHECK(estimate_expectation(gaussian(3, {"1/2", "1"}), e, q("1/2"), o).mean != a.mean);
  CHECK(a.mean >= 0.0);
  CHECK(a.mean <= 1.0);
}

TEST_CASE("standard error scales as 1/sqrt(N)") {
  std::vector<double> se;
  for (long n : {1000L, 10000L, 100000L}) {
    McOptions o;
    o.N = n;
    o.seed = 1;
    o.workers = 2;
    se.push_back(estimate_expectation(gaussian(2, {"1"}), parse_interval_set("[1,inf)"), 1, o).stderr_);
  }
  CHECK(std::fabs(se[0] / se[1] / std::sqrt(10.0) - 1) < 0.2);
  CHECK(std::fabs(se[1] / se[2] / std::sqrt(10.0) - 1) < 0.2);
}

TEST_CASE("agreement with the determinant pipeline") {
  McOptions o;
  o.N = 100000;
  o.seed = 2024;
  o.workers = 2;
  ExpectationQuery e{gaussian(3, {"1", "1/2"}), parse_interval_set("[1,inf)"), 1};
  const CrossCheck c = cross_check(e, o);
  CHECK(c.pass);
  CHECK(c.z <= 3.0);
  ModelOptions bad;
  bad.corrupt_deformed_moment = true;
  CHECK(cross_check(e, o, bad).z > 10.0);
}

TEST_CASE("non-Gaussian weights are refused") {
  SourceModel m{2, {}, Weight::laguerre()};
  CHECK_THROWS_AS(estimate_expectation(m, parse_interval_set("[1,inf)"), 1, McOptions{}), PreconditionError);
}

#include "doctest.h"
#include "rmxs/errors.hpp"
#include "rmxs/ortho.hpp"
#include "rmxs/quadrature.hpp"
#include "rmxs/weights.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace rmxs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
double d(const Real& x) { return static_cast<double>(x); }
Rational q(long p, long r = 1) { return Rational(p) / r; }

Weight quartic() { return Weight::exp_poly({q(0), q(0), q(1, 2), q(0), q(1, 4)}); }

}  // namespace

TEST_CASE("interval sets") {
  IntervalSet e({{2, 3}, {0, 1}, {1, 1.5}, {5, 4}});
  CHECK(e.str() == "[0,1.5]u[2,3]");
  CHECK(e.contains(1.2));
  CHECK(!e.contains(1.7));
  CHECK(parse_interval_set("[1,inf)") == IntervalSet({{1, kInf}}));
  CHECK(parse_interval_set(IntervalSet::real_line().str()) == IntervalSet::real_line());
  CHECK(parse_interval_set("{}").empty());
  CHECK_THROWS_AS(parse_interval_set("[1,x]"), PreconditionError);
}

TEST_CASE("closed-form moments") {
  const Weight g = Weight::gaussian();
  CHECK(exact_moment(g, 0) == 1);
  CHECK(exact_moment(g, 1) == 0);
  CHECK(exact_moment(g, 2) == 1);
  CHECK(exact_moment(g, 3) == 0);
  CHECK(exact_moment(g, 4) == 3);
  CHECK(exact_moment(Weight::laguerre(), 3) == 6);
  CHECK(moment(g, 4).exact);
  CHECK_THROWS_AS(exact_moment(quartic(), 2), PreconditionError);
}

TEST_CASE("quadrature reproduces closed-form moments, j <= 20") {
  for (const Weight& w : {Weight::gaussian(), Weight::laguerre()}) {
    std::vector<double> scale(21, 1.0);
    const auto r = integrate_family(
        w, 21,
        [](const Real& x, Real* out) {
          Real p = 1;
          for (int j = 0; j <= 20; ++j) {
            out[j] = p;
            p *= x;
          }
        },
        GrowthHint{20, 0.0, scale});
    for (int j = 0; j <= 20; ++j) {
      const Real exact = to_real(exact_moment(w, j));
      const Real scale_j = w.kind() == WeightKind::Gaussian ? to_real(exact_moment(w, j + (j % 2))) : exact;
      CHECK(d(abs(r.value[static_cast<std::size_t>(j)] - exact) / scale_j) < 1e-26);
    }
  }
}

TEST_CASE("integrate examples") {
  const Weight g = Weight::gaussian();
  const auto one = integrate(g, [](const Real&) { return Real(1); }, 1e-25);
  CHECK(d(abs(one.value - 1)) < 1e-25);
  const auto e = integrate(g, [](const Real& x) { return exp(x); }, 1e-25, GrowthHint{0, 1.0, {}});
  CHECK(d(abs(e.value - exp(Real(0.5)))) < 1e-25);
  const Weight half = deform_weight(g, IntervalSet({{-kInf, 0}}), q(1));
  CHECK(d(abs(moment(half, 0).value - Real(0.5))) < 1e-26);
  // A discontinuous integrand with its jump declared as a breakpoint.
  const auto chi = integrate(g, [](const Real& x) { return x >= 0 ? Real(1) : Real(0); }, 1e-25, {}, {0.0});
  CHECK(d(abs(chi.value - Real(0.5))) < 1e-25);
  // Laguerre with a tilt it cannot dominate.
  CHECK_THROWS_AS(integrate(Weight::laguerre(), [](const Real& x) { return exp(x); }, 1e-10, GrowthHint{0, 1.0, {}}),
                  QuadratureError);
}

TEST_CASE("deform_weight") {
  const Weight g = Weight::gaussian();
  CHECK(deform_weight(g, IntervalSet({{1, kInf}}), q(0)).key() == "gaussian");
  CHECK(deform_weight(g, IntervalSet(), q(1)).key() == "gaussian");
  const Weight zero = deform_weight(g, IntervalSet::real_line(), q(1));
  CHECK(moment(zero, 0).value == 0);
  CHECK(moment(zero, 0).exact);
  const Weight upper = deform_weight(g, IntervalSet({{0, kInf}}), q(1));
  CHECK(d(abs(moment(upper, 0).value - Real(0.5))) < 1e-26);
  // Laguerre deformation sets are clipped to the support.
  const Weight lag = deform_weight(Weight::laguerre(), IntervalSet({{-1, 1}}), q(1, 2));
  CHECK(lag.region().str() == "[0,1]");
  CHECK_THROWS_AS(deform_weight(upper, IntervalSet({{0, 1}}), q(1)), PreconditionError);
}

TEST_CASE("moments are affine in s") {
  const IntervalSet e({{-1, 1}});
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> num(1, 19);
  for (const Weight& base : {Weight::gaussian(), Weight::laguerre(), quartic()}) {
    const Weight full = deform_weight(base, e, q(1));
    for (int trial = 0; trial < 3; ++trial) {
      const Rational s = q(num(rng), 10);
      const Weight ws = deform_weight(base, e, s);
      for (int j = 0; j <= 6; ++j) {
        // int_E x^j W = M_j(W) - M_j(W_{E,1}).
        const Real on_e = moment(base, j).value - moment(full, j).value;
        const Real expect = moment(base, j).value - to_real(s) * on_e;
        CHECK(d(abs(moment(ws, j).value - expect)) < 1e-25);
      }
    }
  }
}

TEST_CASE("orthonormal_basis examples") {
  const auto g = orthonormal_basis(Weight::gaussian(), 4);
  CHECK(d(abs(g.coeff(0, 0) - 1)) < 1e-30);
  CHECK(d(abs(g.coeff(1, 1) - 1)) < 1e-30);
  CHECK(d(abs(g.coeff(1, 0))) < 1e-30);
  const Real r2 = sqrt(Real(2));
  CHECK(d(abs(g.coeff(2, 2) - 1 / r2)) < 1e-30);
  CHECK(d(abs(g.coeff(2, 0) + 1 / r2)) < 1e-30);
  const auto l = orthonormal_basis(Weight::laguerre(), 3);
  CHECK(d(abs(l.coeff(1, 1) - 1)) < 1e-30);
  CHECK(d(abs(l.coeff(1, 0) + 1)) < 1e-30);
  CHECK_THROWS_AS(orthonormal_basis(deform_weight(Weight::gaussian(), IntervalSet::real_line(), q(1)), 3),
                  HankelNotPD);
  // Indefinite weight: no orthonormal basis, but the monic one exists.
  const Weight ind = deform_weight(Weight::gaussian(), IntervalSet({{1, kInf}}), q(3, 2));
  CHECK_NOTHROW(monic_basis(ind, 5));
}

TEST_CASE("Gram identity and recurrence, n <= 12") {
  for (const Weight& w : {Weight::gaussian(), Weight::laguerre(), quartic()}) {
    const int n = 12;
    const auto b = orthonormal_basis(w, n);
    // Gram matrix by quadrature of the coefficient expansion (not the recurrence).
    std::vector<double> scale;
    for (int k = 0; k < n; ++k) scale.push_back(1.0);
    std::vector<double> gscale;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) gscale.push_back(1.0);
    const auto r = integrate_family(
        w, static_cast<std::size_t>(n * n),
        [&b, n](const Real& x, Real* out) {
          std::vector<Real> p(static_cast<std::size_t>(n), Real(0));
          for (int k = 0; k < n; ++k) {
            Real acc = 0;
            for (int i = k; i >= 0; --i) acc = acc * x + b.coeff(k, i);
            p[static_cast<std::size_t>(k)] = acc;
          }
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out[j * n + k] = p[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(k)];
        },
        GrowthHint{2 * n, 0.0, gscale});
    double worst = 0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, std::fabs(d(r.value[static_cast<std::size_t>(j * n + k)]) - (j == k ? 1.0 : 0.0)));
    CHECK(worst < 1e-10);
    CHECK(gram_defect(b) < 1e-10);
    for (int k = 0; k < n; ++k) CHECK(b.leading(k) > 0);
    // x p_j = sqrt(beta_{j+1}) p_{j+1} + alpha_j p_j + sqrt(beta_j) p_{j-1} on a grid.
    double rec = 0;
    for (double x = -3; x <= 3; x += 0.25)
      for (int j = 0; j + 1 < n; ++j) {
        const Real xr = x;
        Real rhs = sqrt(b.beta(j + 1)) * b.eval(j + 1, xr) + b.alpha(j) * b.eval(j, xr);
        if (j > 0) rhs += sqrt(b.beta(j)) * b.eval(j - 1, xr);
        rec = std::max(rec, d(abs(xr * b.eval(j, xr) - rhs)));
      }
    CHECK(rec < 1e-10);
  }
}

TEST_CASE("gamma_coeff") {
  const auto g = orthonormal_basis(Weight::gaussian(), 4);
  for (double a : {0.3, 1.0, -0.7}) {
    const Real ar = a;
    CHECK(d(abs(gamma_coeff(g, 0, ar) - exp(ar * ar / 2))) < 1e-26);
    CHECK(d(abs(gamma_coeff(g, 1, ar) - ar * exp(ar * ar / 2))) < 1e-26);
  }
  for (const Weight& w : {Weight::laguerre(), quartic()}) {
    const auto b = orthonormal_basis(w, 5);
    CHECK(d(abs(gamma_coeff(b, 0, Real(0)) - sqrt(moment(w, 0).value))) < 1e-26);
    for (int j = 1; j < 5; ++j) CHECK(d(abs(gamma_coeff(b, j, Real(0)))) < 1e-24);
  }
}

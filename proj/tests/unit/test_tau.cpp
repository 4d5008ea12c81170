#include "doctest.h"

#include "rmxs/errors.hpp"
#include "rmxs/linalg.hpp"
#include "rmxs/matrix_model.hpp"
#include "rmxs/schur.hpp"
#include "rmxs/tau.hpp"

#include <cmath>
#include <random>

using namespace rmxs;

namespace {

Rational q(const char* s) { return parse_rational(s); }

TauConfig config(Weight w, int D, int dmax = 4) {
  TauConfig c;
  c.weight = std::move(w);
  c.D = D;
  c.dmax = dmax;
  return c;
}

QSeries t_var(int j, int cap) { return QSeries::variable(Var::t(j), cap); }

// Zhat_d(t - [x]) built from Jacobi-Trudi with rows h_k(t) - x h_{k-1}(t).
QSeries zhat_down_shift_oracle(const TauConfig& cfg, int d, int cap) {
  const auto h = elementary_schur_table<Rational>(cap);
  const QSeries x = QSeries::variable(Var::aux(), cap);
  auto hs = [&](int k) {
    QSeries r(cap);
    if (k >= 0 && k <= cap) r += h[static_cast<std::size_t>(k)];
    if (k - 1 >= 0 && k - 1 <= cap) r -= x * h[static_cast<std::size_t>(k - 1)];
    return r;
  };
  QSeries z(cap);
  for (const Partition& kappa : partitions(d, cap)) {
    const auto l = static_cast<std::size_t>(kappa.length());
    DenseMatrix<QSeries> m(l, l, QSeries(cap));
    for (int p = 1; p <= kappa.length(); ++p)
      for (int c = 1; c <= kappa.length(); ++c)
        m(static_cast<std::size_t>(p - 1), static_cast<std::size_t>(c - 1)) = hs(kappa.part(p) - p + c);
    z += det_expand(m, QSeries(cap), QSeries::constant(Rational(1), cap)) * zhat_coefficient(cfg, d, kappa);
  }
  return z;
}

}  // namespace

TEST_CASE("Zhat_0 is 1 and Zhat_1 is the moment-weighted h sum") {
  const TauConfig cfg = config(Weight::gaussian(), 4);
  CHECK(zhat_series(cfg, 0) == QSeries::constant(Rational(1), 4));
  const auto h = elementary_schur_table<Rational>(4);
  const QSeries expect = h[0] + h[2] * q("1/2") + h[4] * q("3/24");
  CHECK(zhat_series(cfg, 1) == expect);
  // The h_2 coefficient written out: t_2 + t_1^2/2.
  CHECK(h[2] == t_var(2, 4) + t_var(1, 4) * t_var(1, 4) * q("1/2"));
}

TEST_CASE("Zhat constant term is the scaled Hankel determinant") {
  const TauConfig cfg = config(Weight::laguerre(), 3);
  for (int d = 1; d <= 4; ++d) {
    DenseMatrix<Rational> m(static_cast<std::size_t>(d), static_cast<std::size_t>(d), Rational(0));
    Rational denom = 1;
    for (int p = 0; p < d; ++p) {
      for (int c = 0; c < d; ++c) m(static_cast<std::size_t>(p), static_cast<std::size_t>(c)) = exact_moment(cfg.weight, d - 1 - p + c);
      denom *= factorial_rational(d - 1 - p);
    }
    CHECK(zhat_series(cfg, d).constant_term() == det_exact(m) / denom);
    CHECK(det_exact(m) != 0);
  }
}

TEST_CASE("truncation stability") {
  for (const Weight& w : {Weight::gaussian(), Weight::laguerre()}) {
    const TauConfig cfg = config(w, 4);
    for (int d = 1; d <= 3; ++d) CHECK(zhat_series(cfg, d, 6).with_cap(4) == zhat_series(cfg, d, 4));
  }
}

TEST_CASE("Zhat at Miwa points is proportional to the partition function") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 9);
  for (int d = 1; d <= 3; ++d) {
    const TauConfig cfg = config(Weight::gaussian(), 4);
    std::vector<double> ratios;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<Rational> a;
      SourceModel model{d, {}, Weight::gaussian()};
      while (static_cast<int>(a.size()) < d) {
        const Rational x(num(rng), 10);
        if (std::find(a.begin(), a.end(), x) != a.end()) continue;
        a.push_back(x);
        model.sources.push_back({x, 1});
      }
      const Real zhat = to_real(zhat_eval(cfg, d, a, 40));
      ratios.push_back(static_cast<double>(partition_fn(model).value / zhat));
    }
    CHECK(std::fabs(ratios[1] / ratios[0] - 1) < 1e-8);
    CHECK(std::fabs(ratios[2] / ratios[0] - 1) < 1e-8);
  }
}

TEST_CASE("mirror evaluation is evaluation of the sign-flipped series") {
  const TauConfig cfg = config(Weight::gaussian(), 5);
  const std::vector<Rational> a{q("1/2"), q("-1/3")};
  for (int d = 1; d <= 3; ++d) {
    const QSeries flipped = negate_block(zhat_series(cfg, d), Block::T);
    CHECK(zhat_mirror_eval(cfg, d, a) == miwa_eval(flipped, {{a[0], +1}, {a[1], +1}}));
  }
}

TEST_CASE("vertex operator") {
  const TauConfig cfg = config(Weight::gaussian(), 4);
  SUBCASE("d = 0 gives the h series") {
    const SeriesSlice x = vertex_apply(cfg, 0, 0, 4);
    CHECK(x.at(2) == t_var(2, 4) + t_var(1, 4) * t_var(1, 4) * q("1/2"));
  }
  SUBCASE("nothing below z^-d") {
    for (int d = 1; d <= 3; ++d) {
      const SeriesSlice x = vertex_apply(cfg, d, -d - 2, 4);
      CHECK(x.at(-d - 1).is_zero());
      CHECK(x.at(-d - 2).is_zero());
      CHECK_FALSE(x.at(-d).is_zero());
    }
  }
  SUBCASE("shift agrees with the Jacobi-Trudi down-shift") {
    for (const Weight& w : {Weight::gaussian(), Weight::laguerre()}) {
      const TauConfig c = config(w, 4);
      for (int d = 1; d <= 3; ++d) {
        const QSeries oracle = zhat_down_shift_oracle(c, d, 4 + d);
        const QSeries mine = miwa_shift(zhat_series(c, d, 4 + d), {{Rational(1), -1}});
        CHECK(oracle == mine);
      }
    }
  }
  SUBCASE("a narrow window cannot feed the nu pairing") {
    const SeriesSlice x = vertex_apply(cfg, 2, -1, 4);
    CHECK_FALSE(x.exact_below());
    CHECK_THROWS_AS(nu_pair(cfg, 2, x), InsufficientWindow);
  }
}

TEST_CASE("tau ladder: nu pairing maps Zhat_d to Zhat_{d+1} exactly") {
  for (const Weight& w : {Weight::gaussian(), Weight::laguerre()}) {
    const TauConfig cfg = config(w, 4);
    for (int d = 0; d <= 3; ++d) {
      const QSeries next = nu_pair(cfg, d, vertex_apply(cfg, d, -d, cfg.D));
      CHECK(next == zhat_series(cfg, d + 1));
    }
  }
  // Iterating from Zhat_0 = 1; each step consumes d degrees of the cap.
  for (const Weight& w : {Weight::gaussian(), Weight::laguerre()}) {
    QSeries f = QSeries::constant(Rational(1), 9);
    const int caps[] = {9, 7, 4};
    for (int d = 0; d <= 2; ++d) {
      const TauConfig step = config(w, caps[d]);
      f = nu_pair(step, d, vertex_apply_to(step, f, d, -d, step.D));
    }
    CHECK(f == zhat_series(config(w, 4), 3));
  }
  CHECK_THROWS_AS(vertex_apply_to(config(Weight::gaussian(), 4), zhat_series(config(Weight::gaussian(), 4), 2), 2, -2, 4),
                  InsufficientWindow);
  TauConfig bad = config(Weight::gaussian(), 4);
  bad.corrupt_m4 = true;
  // A mutated moment sequence is still a consistent ladder.
  CHECK(nu_pair(bad, 1, vertex_apply(bad, 1, -1, 4)) == zhat_series(bad, 2));
  const TauConfig good = config(Weight::gaussian(), 4);
  CHECK_FALSE(nu_pair(good, 1, vertex_apply(good, 1, -1, 4)) == zhat_series(bad, 2));
}

TEST_CASE("Hirota bilinear identity") {
  const TauConfig cfg = config(Weight::gaussian(), 4);
  for (auto [d1, d2] : std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}})
    CHECK(violations(hirota_residual(cfg, d1, d2)).empty());
  TauConfig bad = cfg;
  bad.corrupt_m4 = true;
  CHECK_FALSE(violations(hirota_residual(bad, 2, 0)).empty());
  CHECK_THROWS_AS(hirota_residual(cfg, 1, 1), PreconditionError);
}

TEST_CASE("Fay-like identity") {
  SUBCASE("a = b") {
    const TauConfig cfg = config(Weight::gaussian(), 4);
    CHECK(fay_residual(cfg, 2, q("1/2"), q("1/2")).is_zero());
  }
  SUBCASE("Gaussian d = 1, a = 1, b = 2") {
    CHECK(fay_residual(config(Weight::gaussian(), 4), 1, q("1"), q("2")).is_zero());
  }
  SUBCASE("d = 1..3 at cap 6") {
    for (const Weight& w : {Weight::gaussian(), Weight::laguerre()})
      for (int d = 1; d <= 3; ++d) CHECK(fay_residual(config(w, 6), d, q("1/2"), q("1/3")).is_zero());
  }
  SUBCASE("scalar evaluation at t = 0") {
    const TauConfig cfg = config(Weight::gaussian(), 4);
    const Rational a = q("1/2"), b = q("1/3");
    for (int d = 1; d <= 3; ++d) {
      const Rational r = a * zhat_eval(cfg, d, {a}, 40) * zhat_eval(cfg, d - 1, {b}, 40) -
                         b * zhat_eval(cfg, d, {b}, 40) * zhat_eval(cfg, d - 1, {a}, 40) -
                         (a - b) * zhat_eval(cfg, d, {a, b}, 40) * zhat_eval(cfg, d - 1, {}, 40);
      const double scale = to_double(zhat_eval(cfg, d, {a, b}, 40) * zhat_eval(cfg, d - 1, {}, 40));
      CHECK(std::fabs(to_double(r) / scale) < 1e-20);
    }
  }
  SUBCASE("mutation breaks it") {
    TauConfig bad = config(Weight::gaussian(), 6);
    bad.corrupt_m4 = true;
    CHECK_FALSE(violations(fay_residual(bad, 2, q("1/2"), q("1/3"))).empty());
    CHECK_FALSE(fay_det_residual(bad, 3, {q("1"), q("1/2"), q("1/3")}).is_zero());
  }
}

TEST_CASE("determinant Fay identity") {
  const TauConfig cfg = config(Weight::gaussian(), 5);
  SUBCASE("m = 1") { CHECK(fay_det_residual(cfg, 2, {q("1/2")}).is_zero()); }
  SUBCASE("m = 2 is the Fay residual times -Zhat_d") {
    for (int d = 2; d <= 3; ++d) {
      const QSeries lhs = fay_det_residual(cfg, d, {q("1/2"), q("1/3")});
      CHECK(lhs == -(zhat_series(cfg, d) * fay_residual(cfg, d, q("1/2"), q("1/3"))));
    }
  }
  SUBCASE("Gaussian d = 3, m = 3") { CHECK(fay_det_residual(cfg, 3, {q("1"), q("1/2"), q("1/3")}).is_zero()); }
  SUBCASE("Laguerre d = 3, m = 3") {
    CHECK(fay_det_residual(config(Weight::laguerre(), 5), 3, {q("1"), q("1/2"), q("1/3")}).is_zero());
  }
  SUBCASE("repeated points are rejected") {
    CHECK_THROWS_AS(fay_det_residual(cfg, 3, {q("1/2"), q("1/2")}), PreconditionError);
  }
}

TEST_CASE("tau config validation") {
  CHECK_THROWS_AS(zhat_series(config(Weight::exp_poly({Rational(0), Rational(0), Rational(0), Rational(0), Rational(1)}), 4), 1),
                  PreconditionError);
  CHECK_THROWS_AS(zhat_series(config(Weight::gaussian(), 4, 2), 3), PreconditionError);
}

#pragma once

// Elementary Schur polynomials h_j(t), Schur polynomials s_kappa, the
// Schur-function expansion of det[exp(a_j lambda_k)], and the Desnanot-Jacobi
// (Dodgson condensation) check.

#include "rmxs/errors.hpp"
#include "rmxs/laurent.hpp"
#include "rmxs/linalg.hpp"
#include "rmxs/partitions.hpp"
#include "rmxs/scalar.hpp"
#include "rmxs/series.hpp"

#include <limits>
#include <type_traits>
#include <vector>

namespace rmxs {

/// Pairwise gap below which a floating alternant/Vandermonde quotient is
/// refused.
inline constexpr double kNearConfluentGap = 1e-8;

/// h_j(t): the coefficient of w^j in exp(sum_k t_k w^k), as a series in the
/// variables of `block`. h_j = 0 for j < 0 and h_0 = 1.
template <class F>
TruncatedSeries<F> elementary_schur(int j, int cap, Block block = Block::T) {
  if (j > cap) throw PreconditionError("h_" + std::to_string(j) + " is not representable at cap " + std::to_string(cap));
  if (j < 0) return TruncatedSeries<F>(cap);
  // j h_j = sum_{k=1}^j k t_k h_{j-k}, from differentiating the generating
  // function in w.
  std::vector<TruncatedSeries<F>> h;
  h.reserve(static_cast<std::size_t>(j) + 1);
  h.push_back(TruncatedSeries<F>::constant(F(1), cap));
  for (int n = 1; n <= j; ++n) {
    TruncatedSeries<F> acc(cap);
    for (int k = 1; k <= n; ++k)
      acc += TruncatedSeries<F>::variable(Var{block, k}, cap) * h[static_cast<std::size_t>(n - k)] * F(k);
    acc *= F(1) / F(n);
    h.push_back(std::move(acc));
  }
  return h.back();
}

/// h_0..h_cap in one pass.
template <class F>
std::vector<TruncatedSeries<F>> elementary_schur_table(int cap, Block block = Block::T) {
  std::vector<TruncatedSeries<F>> h;
  h.push_back(TruncatedSeries<F>::constant(F(1), cap));
  for (int n = 1; n <= cap; ++n) {
    TruncatedSeries<F> acc(cap);
    for (int k = 1; k <= n; ++k)
      acc += TruncatedSeries<F>::variable(Var{block, k}, cap) * h[static_cast<std::size_t>(n - k)] * F(k);
    acc *= F(1) / F(n);
    h.push_back(std::move(acc));
  }
  return h;
}

/// h_j(t - [z^-1]) = h_j(t) - z^-1 h_{j-1}(t), as a slice over z-powers
/// [-1, 0] that is exact on both sides.
template <class F>
LaurentSlice<TruncatedSeries<F>> h_shift_down(int j, int cap) {
  if (j > cap) throw PreconditionError("h_shift_down: j exceeds cap");
  TruncatedSeries<F> zero(cap);
  LaurentSlice<TruncatedSeries<F>> s(-1, 0, zero);
  s.set(0, elementary_schur<F>(j, cap));
  s.set(-1, -elementary_schur<F>(j - 1, cap));
  return s;
}

/// h_j(t + [c]) = sum_{i=0}^j h_{j-i}(t) c^i, for a scalar c.
template <class F>
TruncatedSeries<F> h_shift_up(int j, const F& c, int cap) {
  if (j > cap) throw PreconditionError("h_shift_up: j exceeds cap");
  TruncatedSeries<F> acc(cap);
  F power(1);
  for (int i = 0; i <= j; ++i) {
    acc += elementary_schur<F>(j - i, cap) * power;
    power *= c;
  }
  return acc;
}

/// Complete homogeneous symmetric polynomial h_k(a_1, ..., a_n).
template <class F>
F complete_homogeneous(int k, const std::vector<F>& a) {
  if (k < 0) return F(0);
  // h_k(a_1..a_i) = h_k(a_1..a_{i-1}) + a_i h_{k-1}(a_1..a_i)
  std::vector<F> h(static_cast<std::size_t>(k) + 1, F(0));
  h[0] = F(1);
  for (const F& x : a)
    for (int n = 1; n <= k; ++n) h[static_cast<std::size_t>(n)] += x * h[static_cast<std::size_t>(n - 1)];
  return h[static_cast<std::size_t>(k)];
}

template <class F>
F field_determinant(const DenseMatrix<F>& m) {
  if constexpr (FieldTraits<F>::exact)
    return det_exact(m);
  else
    return det_pivoted(m).value;
}

/// Smallest pairwise distance |a_i - a_j| (infinite for fewer than two points).
template <class F>
double min_pairwise_gap(const std::vector<F>& a) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const F d = FieldTraits<F>::abs(F(a[i] - a[j]));
      double dd;
      if constexpr (std::is_same_v<F, Rational>)
        dd = to_double(d);
      else
        dd = static_cast<double>(d);
      gap = std::min(gap, dd);
    }
  return gap;
}

template <class F>
void require_distinct(const std::vector<F>& a, const char* what) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const F d = FieldTraits<F>::abs(F(a[i] - a[j]));
      bool bad;
      if constexpr (FieldTraits<F>::exact)
        bad = FieldTraits<F>::is_zero(d);
      else
        bad = static_cast<double>(d) < kNearConfluentGap;
      if (bad) throw NearConfluent(std::string(what) + ": points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
}

/// s_kappa(a) by the Jacobi-Trudi determinant det[h_{kappa_p - p + q}(a)].
/// No distinctness requirement.
template <class F>
F schur_poly(const Partition& kappa, const std::vector<F>& a) {
  const int l = kappa.length();
  if (l == 0) return F(1);
  if (l > static_cast<int>(a.size())) return F(0);
  DenseMatrix<F> m(static_cast<std::size_t>(l), static_cast<std::size_t>(l), F(0));
  for (int p = 1; p <= l; ++p)
    for (int q = 1; q <= l; ++q)
      m(static_cast<std::size_t>(p - 1), static_cast<std::size_t>(q - 1)) =
          complete_homogeneous(kappa.part(p) - p + q, a);
  return field_determinant(m);
}

/// Vandermonde product prod_{j<k} (x_k - x_j) = det(x_j^{k-1}).
template <class F>
F vandermonde(const std::vector<F>& x) {
  F v(1);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = j + 1; k < x.size(); ++k) v *= F(x[k] - x[j]);
  return v;
}

/// s_kappa(a) as the alternant ratio det(a_j^{kappa_q + n - q}) / Delta(a).
/// Throws NearConfluent for coinciding (or, for floats, nearly coinciding)
/// points.
template <class F>
F schur_poly_alternant(const Partition& kappa, const std::vector<F>& a) {
  const int n = static_cast<int>(a.size());
  if (kappa.length() > n) return F(0);
  require_distinct(a, "schur_poly_alternant");
  DenseMatrix<F> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n), F(0));
  for (int j = 0; j < n; ++j)
    for (int q = 1; q <= n; ++q) {
      const int e = kappa.part(q) + n - q;
      F x(1);
      for (int k = 0; k < e; ++k) x *= a[static_cast<std::size_t>(j)];
      m(static_cast<std::size_t>(j), static_cast<std::size_t>(q - 1)) = x;
    }
  // det(a_j^{n-q}) = (-1)^{n(n-1)/2} Delta(a) with Delta = prod_{j<k}(a_k - a_j).
  F denom = vandermonde(a);
  if ((n * (n - 1) / 2) % 2 == 1) denom = -denom;
  return field_determinant(m) / denom;
}

/// |det[e^{a_j l_k}] / (Delta(a) Delta(l)) - sum_{|kappa|<=D, l(kappa)<=d}
/// s_kappa(l) s_kappa(a) / prod_q (kappa_q + d - q)!|, evaluated in binary128.
///
/// No closed-form truncation bound is used. The residual is the tail of a
/// convergent series whose weight-w block is O((max|a| max|l|)^w / w!);
/// callers check convergence empirically: the residual must shrink as D
/// grows and stay below twice the magnitude of the first omitted block.
double hciz_expansion_residual(const std::vector<double>& a, const std::vector<double>& lambda, int max_weight);

/// Magnitude of the weight-w block of the expansion above.
double hciz_expansion_block(const std::vector<double>& a, const std::vector<double>& lambda, int weight);

/// |det(M) det(M_{1,m}^{1,m}) - (det(M_m^m) det(M_1^1) - det(M_m^1) det(M_1^m))|
/// where M_r^c deletes row r and column c (1-based, m = size).
template <class F>
F dodgson_residual(const DenseMatrix<F>& m) {
  if (!m.square() || m.rows() < 3) throw PreconditionError("dodgson_residual needs a square matrix of size >= 3");
  const std::size_t last = m.rows() - 1;
  const F whole = field_determinant(m);
  const F inner = field_determinant(m.without({0, last}, {0, last}));
  const F mm = field_determinant(m.without({last}, {last}));
  const F m11 = field_determinant(m.without({0}, {0}));
  const F m1m = field_determinant(m.without({0}, {last}));
  const F mm1 = field_determinant(m.without({last}, {0}));
  return FieldTraits<F>::abs(F(whole * inner - (mm * m11 - m1m * mm1)));
}

}  // namespace rmxs

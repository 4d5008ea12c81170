#pragma once

// Small dense matrices over fields and commutative rings, and the
// determinant routines the identity checks need.

#include "rmxs/errors.hpp"
#include "rmxs/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rmxs {

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols) : DenseMatrix(rows, cols, T(0)) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw PreconditionError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// The submatrix with the given (sorted, distinct) rows and columns deleted.
  DenseMatrix without(const std::vector<std::size_t>& drop_rows, const std::vector<std::size_t>& drop_cols) const {
    auto keep = [](std::size_t n, const std::vector<std::size_t>& drop) {
      std::vector<std::size_t> k;
      for (std::size_t i = 0; i < n; ++i)
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) k.push_back(i);
      return k;
    };
    const auto rk = keep(rows_, drop_rows);
    const auto ck = keep(cols_, drop_cols);
    DenseMatrix m;
    m.rows_ = rk.size();
    m.cols_ = ck.size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (auto i : rk)
      for (auto j : ck) m.data_.push_back((*this)(i, j));
    return m;
  }

  template <class U, class Fn>
  DenseMatrix<U> map(Fn fn) const {
    DenseMatrix<U> m(rows_, cols_, U(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = fn((*this)(i, j));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Determinant by Gaussian elimination with exact pivot tests. Intended for
/// exact fields (Rational); the empty matrix has determinant 1.
template <class T>
T det_exact(DenseMatrix<T> m) {
  if (!m.square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  T det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && FieldTraits<T>::is_zero(m(piv, k))) ++piv;
    if (piv == n) return T(0);
    if (piv != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(m(k, j), m(piv, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (FieldTraits<T>::is_zero(m(i, k))) continue;
      const T f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

template <class T>
struct DetResult {
  T value;
  /// sum_ij |a_ij (A^-1)_ji|: the first-order amplification of relative entry
  /// errors into the relative error of det(A). Infinite for singular input.
  double condition = 0.0;
  /// sum_ij err_ij |(A^-1)_ji|: first-order bound on the relative error of
  /// det(A) from absolute entry errors err_ij (0 when none are given).
  double noise = 0.0;
};

/// Determinant of a floating matrix by LU with full pivoting, with the
/// relative-perturbation condition number of the determinant.
template <class T>
DetResult<T> det_pivoted(const DenseMatrix<T>& a, const DenseMatrix<double>* entry_error = nullptr) {
  using std::abs;
  if (!a.square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return {T(1), 0.0};
  DenseMatrix<T> lu = a;
  std::vector<std::size_t> rperm(n), cperm(n);
  for (std::size_t i = 0; i < n; ++i) rperm[i] = cperm[i] = i;
  T det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = k, pj = k;
    T best(0);
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (abs(lu(i, j)) > best) {
          best = abs(lu(i, j));
          pi = i;
          pj = j;
        }
    if (best == 0)
      return {T(0), std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    if (pi != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pi, j));
      std::swap(rperm[k], rperm[pi]);
      det = -det;
    }
    if (pj != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(lu(i, k), lu(i, pj));
      std::swap(cperm[k], cperm[pj]);
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      lu(i, k) /= lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
    }
  }
  // Inverse of the permuted matrix P A Q = L U, column by column.
  DenseMatrix<T> inv(n, n, T(0));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<T> x(n, T(0));
    for (std::size_t i = 0; i < n; ++i) x[i] = (rperm[i] == c) ? T(1) : T(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu(ii, j) * x[j];
      x[ii] /= lu(ii, ii);
    }
    // Undo the column permutation: row cperm[i] of A^-1 is x[i].
    for (std::size_t i = 0; i < n; ++i) inv(cperm[i], c) = x[i];
  }
  T cond(0), noise(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cond += abs(a(i, j) * inv(j, i));
      if (entry_error) noise += T((*entry_error)(i, j)) * abs(inv(j, i));
    }
  return {det, static_cast<double>(cond), static_cast<double>(noise)};
}

/// Determinant over a commutative ring by Laplace expansion along rows with
/// memoisation on the remaining column set (O(n 2^n) ring products).
template <class R>
R det_expand(const DenseMatrix<R>& m, const R& zero, const R& one) {
  if (!m.square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return one;
  if (n > 20) throw PreconditionError("det_expand limited to 20x20");
  std::vector<std::unordered_map<std::uint32_t, R>> memo(n);
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  // minor(k, mask): determinant of rows k..n-1 restricted to the columns in mask.
  auto minor = [&](auto&& self, std::size_t k, std::uint32_t mask) -> R {
    if (k == n) return one;
    auto it = memo[k].find(mask);
    if (it != memo[k].end()) return it->second;
    R acc = zero;
    int position = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      const R& entry = m(k, c);
      bool entry_zero;
      if constexpr (requires { entry.is_zero(); })
        entry_zero = entry.is_zero();
      else
        entry_zero = FieldTraits<R>::is_zero(entry);
      if (!entry_zero) {
        R sub = self(self, k + 1, mask & ~(1u << c));
        if (position % 2 == 0)
          acc += entry * sub;
        else
          acc -= entry * sub;
      }
      ++position;
    }
    memo[k].emplace(mask, acc);
    return acc;
  };
  return minor(minor, 0, full);
}

}  // namespace rmxs

#pragma once

// Orthogonal polynomials for a Weight, built from the Hankel moment matrix by
// an LDL^T factorisation (exact over the rationals when the weight has
// closed-form moments, binary128 otherwise).

#include "rmxs/scalar.hpp"
#include "rmxs/weights.hpp"

#include <vector>

namespace rmxs {

class OrthoBasis {
 public:
  const Weight& weight() const { return weight_; }
  /// Number of polynomials p_0 .. p_{n-1}.
  int degree() const { return n_; }
  /// True when every norm h_k is positive, so the orthonormal p_k exist.
  bool positive() const { return positive_; }

  /// Monic pi_k = sum_i monic_coeff(k, i) x^i, k <= n (pi_n is kept for the
  /// last recurrence coefficient).
  const Real& monic_coeff(int k, int i) const { return monic_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]; }
  /// h_k = int pi_k^2 W.
  const Real& norm(int k) const { return h_[static_cast<std::size_t>(k)]; }
  /// Coefficient of x^i in the orthonormal p_k = pi_k / sqrt(h_k).
  Real coeff(int k, int i) const;
  Real leading(int k) const;

  /// alpha_k (k < n) and beta_k (1 <= k <= n) of
  /// x pi_k = pi_{k+1} + alpha_k pi_k + beta_k pi_{k-1};
  /// for the orthonormal family x p_k = sqrt(beta_{k+1}) p_{k+1} + alpha_k p_k + sqrt(beta_k) p_{k-1}.
  const Real& alpha(int k) const { return alpha_[static_cast<std::size_t>(k)]; }
  const Real& beta(int k) const { return beta_[static_cast<std::size_t>(k)]; }

  /// pi_0(x) .. pi_n(x) by the recurrence.
  std::vector<Real> monic_values(const Real& x) const;
  /// p_k(x).
  Real eval(int k, const Real& x) const;
  /// sum_i |coefficient of x^i in pi_k|.
  double monic_coeff_sum(int k) const;

 private:
  friend OrthoBasis build_basis(const Weight& w, int n, bool require_positive);

  Weight weight_;
  int n_ = 0;
  bool positive_ = false;
  std::vector<std::vector<Real>> monic_;
  std::vector<Real> h_;
  std::vector<Real> alpha_;
  std::vector<Real> beta_;
};

/// Orthonormal basis p_0 .. p_{n-1}; throws HankelNotPD unless the Hankel
/// matrix [M_{i+j}]_{i,j<=n} is positive definite.
OrthoBasis orthonormal_basis(const Weight& w, int n);

/// Monic basis pi_0 .. pi_{n-1}; allows an indefinite (but nonsingular)
/// Hankel matrix, as happens for W(1 - s chi_E) with s > 1.
OrthoBasis monic_basis(const Weight& w, int n);

OrthoBasis build_basis(const Weight& w, int n, bool require_positive);

struct TiltedIntegrals {
  std::vector<Real> value;   // int pi_k(x) e^{a x} W(x) dx, k < n
  std::vector<double> error;
};

/// int pi_k e^{a x} W for all k < B.degree(), by one vector quadrature
/// against B's own weight. Cached per (weight, n, a).
const TiltedIntegrals& tilted_monic_integrals(const OrthoBasis& b, const Real& a);

/// Gamma_j(a) = int p_j(x) e^{a x} W(x) dx for the orthonormal basis B.
Real gamma_coeff(const OrthoBasis& b, int j, const Real& a);

/// max_{j,k} |int p_j p_k W - delta_jk|, with the Gram matrix computed by
/// quadrature of the explicit coefficient expansion of the p_k.
double gram_defect(const OrthoBasis& b);

/// Drops every cached basis and tilted integral.
void clear_ortho_caches();

}  // namespace rmxs

#pragma once

// Hermitian matrix model with external source: partition functions Z_d by
// Andreief reduction, gap-probability expectations, the rank-1 ladder built
// from orthogonal polynomials, and the two identity checks that tie them
// together. Every constant depending only on d is set to 1; all checked
// quantities are ratios in which such constants cancel.

#include "rmxs/intervals.hpp"
#include "rmxs/scalar.hpp"
#include "rmxs/weights.hpp"

#include <string>
#include <vector>

namespace rmxs {

inline constexpr int kMaxDimension = 10;

struct Source {
  Rational a;
  int multiplicity = 1;
};

struct SourceModel {
  int d = 1;
  /// Listed nonzero, pairwise distinct eigenvalues of A; the remaining
  /// d - sum(multiplicity) eigenvalues are 0.
  std::vector<Source> sources;
  Weight weight = Weight::gaussian();

  /// Throws PreconditionError for d outside [1, kMaxDimension], zero or
  /// repeated sources, multiplicities < 1, too many sources, or a source the
  /// weight cannot dominate; NearConfluent for distinct sources closer than
  /// kNearConfluentGap.
  void validate() const;
  std::string str() const;
};

struct ExpectationQuery {
  SourceModel model;
  IntervalSet region;
  Rational s = 0;
};

/// A computed value with its numerical diagnostics.
struct Estimate {
  Real value;
  /// First-order bound on the relative error from quadrature errors.
  double noise = 0.0;
  /// Largest determinant condition number met on the way.
  double condition = 0.0;
};

struct ModelOptions {
  /// Mutation self-test: adds 1 to every int e^{y x} W dx (the first Andreief
  /// row) of a deformed weight.
  bool corrupt_deformed_moment = false;
};

/// int x^n e^{y x} W(x) dx, n = 0..kPowerFamily-1, with error bounds.
inline constexpr int kPowerFamily = 2 * kMaxDimension + 1;
struct PowerIntegrals {
  std::vector<Real> value;
  std::vector<double> error;
};
const PowerIntegrals& power_integrals(const Weight& w, const Rational& y);

/// Z_d = d! det[int x^r (x^p e^{y_g x} / p!) W dx] / prod_{g<h} (y_h - y_g)^{m_g m_h},
/// columns grouped by distinct source y_g (listed sources sorted, then the
/// zero group), p < m_g.
Estimate partition_fn(const SourceModel& model, const ModelOptions& opts = {});

/// l! a^{-(l-1)} Gamma_{l-1}(a), with Gamma from the orthonormal basis of w.
Estimate rank1_partition_fn(const Weight& w, int l, const Rational& a);

/// Z_l(a) / Z_l(0) = (l-1)! a^{-(l-1)} int pi_{l-1} e^{a x} W / h_{l-1}, from
/// the monic basis of w (valid for indefinite w as well).
Estimate rank1_ratio(const Weight& w, int l, const Rational& a);

/// E_d(a; E; s) = Z_d^{W_{E,s}}(a) / Z_d^W(a).
Estimate expectation(const ExpectationQuery& q, const ModelOptions& opts = {});

/// E_d(a; E; s) / E_d(E; s).
Estimate normalized_expectation(const ExpectationQuery& q, const ModelOptions& opts = {});

/// det[Gamma_{d-j}(a_k) Ebar_{d-j+1}(a_k; E; s)] / det[Gamma_{d-j}(a_k)],
/// j, k = 1..m, with every Ebar from the rank-1 ladder.
Estimate rank_reduction_rhs(const ExpectationQuery& q);

struct IdentityReport {
  Real lhs;
  Real rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  /// Relative noise floor of the comparison (both sides).
  double noise = 0.0;
  double condition = 0.0;
  double min_gap = 0.0;
  /// |denominator determinant| where one exists.
  double det_magnitude = 0.0;
};

IdentityReport make_report(const Estimate& lhs, const Estimate& rhs);

/// normalized_expectation against rank_reduction_rhs.
IdentityReport verify_main_identity(const ExpectationQuery& q, const ModelOptions& opts = {});

/// Z_d(a_1..a_m) / Z_d against det[a_k^{m-j} Z_{d+1-j}(a_k) / Z_{d+1-j}] / Delta_m(a),
/// Delta_m = prod_{j<k} (a_j - a_k); the left side by Andreief, the rank-1
/// ratios by the ladder.
IdentityReport z_ratio_det_check(const Weight& w, int d, const std::vector<Rational>& a,
                                 const ModelOptions& opts = {});

/// Drops every cached quadrature result (moments, tilted families, power families).
void clear_caches();

}  // namespace rmxs

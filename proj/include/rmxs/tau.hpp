#pragma once

// The tau vector Zhat_d(t) as exact truncated series, and the residual
// builders for the vertex-operator ladder, the Hirota bilinear identity, the
// Fay-like identity and its determinant form.
//
// Conventions: Chat_d = 1 for every d; weights of t_j, tilde t_j and the
// auxiliary grading variable x are j, j and 1. Shifts by Miwa points [c] are
// realized as t -> t + [c x], so every residual is exact in the joint grading
// at the configured cap.

#include "rmxs/laurent.hpp"
#include "rmxs/partitions.hpp"
#include "rmxs/scalar.hpp"
#include "rmxs/series.hpp"
#include "rmxs/weights.hpp"

#include <string>
#include <vector>

namespace rmxs {

using QSeries = TruncatedSeries<Rational>;
using SeriesSlice = LaurentSlice<QSeries>;

struct TauConfig {
  Weight weight = Weight::gaussian();
  /// Weighted-degree cap of every reported series.
  int D = 4;
  int dmax = 4;
  /// Mutation self-test: use M_4 + 1 in place of M_4. Any moment sequence
  /// yields a consistent tau vector, so the residual builders mutate only
  /// their top-index component.
  bool corrupt_m4 = false;

  /// Throws PreconditionError unless the weight has exact moments, D >= 1 and
  /// dmax >= 1.
  void validate() const;
  std::string key() const;
};

/// M_j of the configured weight (mutated when requested).
Rational tau_moment(const TauConfig& cfg, int j);

/// det[M_{kappa_p + d - p + q - 1}]_{p,q=1..d} / prod_q (kappa_q + d - q)!.
Rational zhat_coefficient(const TauConfig& cfg, int d, const Partition& kappa);

/// Zhat_d(t) = sum_{l(kappa) <= d, |kappa| <= cap} zhat_coefficient * s_kappa(t);
/// Zhat_0 = 1. cap < 0 means cfg.D. Cached.
QSeries zhat_series(const TauConfig& cfg, int d, int cap = -1);

/// Zhat_d([a_1] + ... + [a_n]) summed over |kappa| <= max_weight, with
/// s_kappa evaluated as a Schur polynomial of the points.
Rational zhat_eval(const TauConfig& cfg, int d, const std::vector<Rational>& a, int max_weight);

/// Zhat_d(-([a_1] + ... + [a_n])) at cap cfg.D, by miwa_eval with flipped signs.
Rational zhat_mirror_eval(const TauConfig& cfg, int d, const std::vector<Rational>& a);

/// X(t,z) Zhat_d(t) = exp(sum t_k z^k) Zhat_d(t - [z^-1]) restricted to the
/// z-powers [zlo, zhi]. The full result lives on [-d, cfg.D]; a narrower
/// request yields a slice whose cut sides are marked unknown.
SeriesSlice vertex_apply(const TauConfig& cfg, int d, int zlo, int zhi);

/// The same operator applied to a given series f standing in for Zhat_d;
/// f must be known up to cap cfg.D + d.
SeriesSlice vertex_apply_to(const TauConfig& cfg, const QSeries& f, int d, int zlo, int zhi);

/// nu_d: coefficient (-1)^d M_{j+d} / j! at z^{d-j-1}, over [lo, hi]. Zero
/// above d - 1; unknown below lo.
SeriesSlice nu_slice(const TauConfig& cfg, int d, int lo, int hi);

/// Residue of X(z) nu_d(z): should equal Zhat_{d+1}.
QSeries nu_pair(const TauConfig& cfg, int d, const SeriesSlice& x);

struct Violation {
  std::string monomial;
  std::string coefficient;
};

/// Every nonzero coefficient of a residual series.
std::vector<Violation> violations(const QSeries& residual);

/// Coefficient of z^-1 in Zhat_{d1}(tt - [z^-1]) Zhat_{d2+1}(t + [z^-1])
/// exp(sum (tt_j - t_j) z^j) z^{d1-d2-1}, in the joint (t, tt) grading at
/// cfg.D. With cfg.corrupt_m4 only the Zhat_{d1} factor is mutated.
QSeries hirota_residual(const TauConfig& cfg, int d1, int d2);

/// a Zhat_d(t+[a]) Zhat_{d-1}(t+[b]) - b Zhat_d(t+[b]) Zhat_{d-1}(t+[a])
///   - (a-b) Zhat_d(t+[a]+[b]) Zhat_{d-1}(t).
/// With cfg.corrupt_m4 only the Zhat_d factors are mutated.
QSeries fay_residual(const TauConfig& cfg, int d, const Rational& a, const Rational& b);

/// Delta_m(a) Zhat_d(t + sum_k [a_k]) prod_{j=1}^m Zhat_{d+1-j}(t)
///   - Zhat_d(t) det[a_k^{m-j} Zhat_{d+1-j}(t + [a_k])]_{j,k=1..m},
/// Delta_m(a) = prod_{j<k} (a_j - a_k). With cfg.corrupt_m4 only the Zhat_d
/// factors are mutated.
QSeries fay_det_residual(const TauConfig& cfg, int d, const std::vector<Rational>& a);

void clear_tau_cache();

}  // namespace rmxs

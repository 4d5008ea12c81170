#pragma once

// Weight functions W(x) on the real line: the unit Gaussian, the Laguerre
// weight e^{-x} on [0, inf), exp(-V(x)) for an even-degree polynomial V with
// positive leading coefficient, and indicator deformations W(x)(1 - s chi_E(x)).

#include "rmxs/intervals.hpp"
#include "rmxs/scalar.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace rmxs {

enum class WeightKind { Gaussian, Laguerre, ExpPoly, Deformed };

class Weight {
 public:
  /// e^{-x^2/2} / sqrt(2 pi).
  static Weight gaussian();
  /// e^{-x} on [0, inf).
  static Weight laguerre();
  /// e^{-V(x)} with V(x) = sum_k v[k] x^k; the top coefficient must be
  /// positive and of even degree >= 2.
  static Weight exp_poly(std::vector<Rational> v);

  WeightKind kind() const { return kind_; }
  bool exact_moments() const { return kind_ == WeightKind::Gaussian || kind_ == WeightKind::Laguerre; }

  /// The undeformed weight (the weight itself unless Deformed).
  const Weight& base() const { return base_ ? *base_ : *this; }
  /// E and s of a Deformed weight (empty set and 0 otherwise).
  const IntervalSet& region() const { return region_; }
  const Rational& strength() const { return s_; }
  /// Coefficients of V for ExpPoly.
  const std::vector<Rational>& potential() const { return v_; }

  /// Left end of the support: 0 for Laguerre-based weights, -inf otherwise.
  double support_lo() const;

  /// log W_base(x) and its derivative, for x in the support.
  Real log_base_density(const Real& x) const;
  double log_base_density(double x) const;
  double log_base_slope(double x) const;
  /// Beyond this |x| the base log-density is concave, so tails decay at least
  /// geometrically past any point where the log-slope is negative.
  double concave_beyond() const;

  /// Sources a with e^{a x} W integrable satisfy a < max_tilt() (and
  /// a > -max_tilt() for two-sided supports): 1 for Laguerre, inf otherwise.
  double max_tilt() const { return base().kind_ == WeightKind::Laguerre ? 1.0 : std::numeric_limits<double>::infinity(); }

  /// 1 - s chi_E(x).
  Real deformation_at(double x) const;
  Real density(const Real& x) const;

  /// Canonical identifier, e.g. "gaussian", "laguerre",
  /// "exppoly[0,0,0,0,1/4]", "gaussian|E=[1,inf)|s=1/2".
  std::string key() const;

 private:
  WeightKind kind_ = WeightKind::Gaussian;
  std::vector<Rational> v_;
  std::shared_ptr<const Weight> base_;
  IntervalSet region_;
  Rational s_ = 0;

  friend Weight deform_weight(const Weight& w, const IntervalSet& e, const Rational& s);
};

/// W_{E,s}(x) = W(x)(1 - s chi_E(x)). E is clipped to the support; s = 0 or an
/// empty clipped E returns W itself. Deforming a deformed weight is rejected.
Weight deform_weight(const Weight& w, const IntervalSet& e, const Rational& s);

/// M_j for weights with closed-form moments: (j-1)!! / 0 for the Gaussian,
/// j! for Laguerre.
Rational exact_moment(const Weight& w, int j);

struct MomentValue {
  Real value;
  double error = 0.0;  // absolute error bound; 0 for exact values
  bool exact = false;
};

/// M_j = int x^j W(x) dx: closed form where available (including a
/// deformation whose E covers the whole support, which scales by 1 - s),
/// quadrature otherwise.
MomentValue moment(const Weight& w, int j);

/// M_0 .. M_jmax.
std::vector<MomentValue> moments(const Weight& w, int jmax);

void clear_moment_cache();

}  // namespace rmxs

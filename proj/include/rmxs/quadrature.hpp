#pragma once

// Adaptive Gauss-Legendre quadrature of vector-valued integrands against a
// Weight, on a domain truncated by explicit tail bounds.
//
// The integrand family f_0..f_{n-1} comes with a growth hint
// |f_i(x)| <= scale_i * max(1, |x|)^degree * e^{rate x}. Past the point X where
// the log-slope of that bound times W is negative (and the base weight is
// log-concave), the tail integral is at most bound(X) / |slope(X)|, and X is
// pushed out until that is below a quarter of each component's tolerance.
// Panels always break at the support end, at 0 and at every endpoint of a
// deformation set E, so the integrand is smooth on each panel.

#include "rmxs/scalar.hpp"
#include "rmxs/weights.hpp"

#include <functional>
#include <vector>

namespace rmxs {

struct GaussLegendreRule {
  std::vector<Real> nodes;    // on [-1, 1], ascending
  std::vector<Real> weights;
};

/// n-point rule computed by Newton iteration in binary128; cached.
const GaussLegendreRule& gauss_legendre(int n);

struct GrowthHint {
  int degree = 0;
  double rate = 0.0;
  std::vector<double> scale;  // per component; empty means all 1
};

struct QuadratureOptions {
  /// Per-component target: error_i <= max(abs_tol, rel_tol * int |f_i| W).
  double rel_tol = 1e-28;
  double abs_tol = 0.0;
  int order = 20;
  int max_depth = 48;
  /// Extra panel boundaries (discontinuities of the integrand).
  std::vector<double> breakpoints;
};

struct QuadratureResult {
  std::vector<Real> value;
  std::vector<double> error;  // panel error estimate + tail bound
  double lo = 0.0;
  double hi = 0.0;
  int panels = 0;
};

using FamilyFn = std::function<void(const Real& x, Real* out)>;

/// int f_i(x) W(x) dx for i < n. Throws QuadratureError if the tail bound is
/// unachievable (integrand not dominated by W) or refinement does not converge.
QuadratureResult integrate_family(const Weight& w, std::size_t n, const FamilyFn& f, const GrowthHint& hint,
                                  const QuadratureOptions& opts = {});

struct ScalarIntegral {
  Real value;
  double error = 0.0;
};

/// int f(x) W(x) dx to absolute tolerance tol.
ScalarIntegral integrate(const Weight& w, const std::function<Real(const Real&)>& f, double tol,
                         GrowthHint hint = {}, std::vector<double> breakpoints = {});

}  // namespace rmxs

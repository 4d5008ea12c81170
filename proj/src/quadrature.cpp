#include "rmxs/quadrature.hpp"

#include "rmxs/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace rmxs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxDomain = 1e5;

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const Real pi = boost::math::constants::pi<Real>();
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int i = 0; i < n; ++i) {
    Real x = cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= 4 * eps) break;
    }
    // Recompute the derivative at the converged node.
    Real p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
      p0 = p1;
      p1 = p2;
    }
    dp = Real(n) * (x * p1 - p0) / (x * x - 1);
    const auto slot = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[slot] = x;
    rule.weights[slot] = Real(2) / ((1 - x * x) * dp * dp);
  }
  return rule;
}

// Log of the tail bound at distance X into one side, without the component
// scale: deg*log X + rate*X + log W(X) + log(factor) - log(kappa), where
// kappa = -(log-slope) must be positive. Returns +inf where no bound applies.
struct TailModel {
  const Weight* w;
  int degree;
  double rate;
  double factor;  // sup |1 - s chi_E| on the tail
  int side;       // +1 right, -1 left

  double log_bound(double X) const {
    if (factor == 0.0) return -kInf;
    const double x = side * X;
    const double slope = degree / X + side * rate + side * w->log_base_slope(x);
    if (!(slope < 0)) return kInf;
    return degree * std::log(X) + rate * x + w->log_base_density(x) + std::log(factor) - std::log(-slope);
  }
};

// Smallest X >= x0 on the search ladder with log_bound(X) + offset <= 0.
double find_cut(const TailModel& m, double x0, double offset) {
  if (m.factor == 0.0) return x0;
  double X = x0;
  while (X <= kMaxDomain) {
    if (m.log_bound(X) + offset <= 0) return X;
    X += std::max(0.25, 0.05 * X);
  }
  throw QuadratureError("tail bound unachievable for weight '" + m.w->key() +
                        "': the integrand is not dominated by the weight");
}

struct Engine {
  const Weight& w;
  std::size_t n;
  const FamilyFn& f;
  const GaussLegendreRule& rule;
  std::vector<Real> buf;

  Engine(const Weight& w_, std::size_t n_, const FamilyFn& f_, int order)
      : w(w_), n(n_), f(f_), rule(gauss_legendre(order)), buf(n_) {}

  // GL approximation of int_u^v f_i W on a panel where the deformation factor
  // is constant; optionally of |f_i| W.
  void panel(const Real& u, const Real& v, const Real& factor, bool absolute, std::vector<Real>& out) {
    out.assign(n, Real(0));
    const Real half = (v - u) / 2;
    const Real mid = (u + v) / 2;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const Real x = mid + half * rule.nodes[k];
      f(x, buf.data());
      const Real wk = rule.weights[k] * exp(w.log_base_density(x));
      for (std::size_t i = 0; i < n; ++i) out[i] += wk * (absolute ? Real(abs(buf[i])) : buf[i]);
    }
    const Real scale = absolute ? Real(half * abs(factor)) : Real(half * factor);
    for (std::size_t i = 0; i < n; ++i) out[i] *= scale;
  }
};

std::vector<double> panel_grid(double a, double b, std::vector<double> cuts, double width) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::vector<double> pts;
  for (double c : cuts)
    if (c >= a && c <= b) pts.push_back(c);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> grid;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((pts[k + 1] - pts[k]) / width)));
    for (int p = 0; p < pieces; ++p) grid.push_back(pts[k] + (pts[k + 1] - pts[k]) * p / pieces);
  }
  grid.push_back(pts.back());
  return grid;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 2 || n > 200) throw PreconditionError("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

QuadratureResult integrate_family(const Weight& w, std::size_t n, const FamilyFn& f, const GrowthHint& hint,
                                  const QuadratureOptions& opts) {
  if (n == 0) return {};
  std::vector<double> scale = hint.scale;
  if (scale.empty()) scale.assign(n, 1.0);
  if (scale.size() != n) throw PreconditionError("growth hint has the wrong number of scales");

  // Breakpoints: support end, 0, deformation endpoints, caller extras.
  std::vector<double> cuts = opts.breakpoints;
  cuts.push_back(0.0);
  for (double e : w.region().endpoints()) cuts.push_back(e);
  const double supp_lo = w.support_lo();
  double x0 = std::max(1.0, w.concave_beyond());
  for (double c : cuts)
    if (std::isfinite(c)) x0 = std::max(x0, std::fabs(c) + 1e-9);

  // Deformation factor far out on each side.
  const Real s = to_real(w.strength());
  auto far_factor = [&](double x) {
    return static_cast<double>(abs(Real(1) - (w.region().contains(x) ? s : Real(0))));
  };
  const TailModel right{&w, hint.degree, hint.rate, w.kind() == WeightKind::Deformed ? far_factor(kInf) : 1.0, +1};
  const TailModel left{&w, hint.degree, hint.rate, w.kind() == WeightKind::Deformed ? far_factor(-kInf) : 1.0, -1};
  const bool two_sided = !std::isfinite(supp_lo);

  Engine eng(w, n, f, opts.order);
  std::vector<Real> tmp;

  // Coarse pass for the L1 scale of each component.
  double max_log_scale = -kInf;
  for (double sc : scale) max_log_scale = std::max(max_log_scale, std::log(std::max(sc, 1e-300)));
  const double coarse_offset = max_log_scale + 100.0;
  const double cb = find_cut(right, x0, coarse_offset);
  const double ca = two_sided ? -find_cut(left, x0, coarse_offset) : supp_lo;
  std::vector<double> l1(n, 0.0);
  {
    const auto grid = panel_grid(ca, cb, cuts, 1.0);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      eng.panel(Real(grid[k]), Real(grid[k + 1]), w.deformation_at(0.5 * (grid[k] + grid[k + 1])), true, tmp);
      for (std::size_t i = 0; i < n; ++i) l1[i] += static_cast<double>(tmp[i]);
    }
  }
  std::vector<double> tol(n);
  double offset = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    tol[i] = std::max({opts.abs_tol, opts.rel_tol * l1[i], 1e-250});
    offset = std::max(offset, std::log(std::max(scale[i], 1e-300)) - std::log(tol[i] / 4));
  }

  QuadratureResult res;
  res.hi = find_cut(right, x0, offset);
  res.lo = two_sided ? -find_cut(left, x0, offset) : supp_lo;
  res.value.assign(n, Real(0));
  res.error.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double tail = 0.0;
    if (double lb = right.log_bound(res.hi); lb > -kInf) tail += scale[i] * std::exp(lb);
    if (two_sided)
      if (double lb = left.log_bound(-res.lo); lb > -kInf) tail += scale[i] * std::exp(lb);
    res.error[i] = tail;
  }

  const double total = res.hi - res.lo;
  const auto grid = panel_grid(res.lo, res.hi, cuts, 1.0);
  std::vector<Real> whole, lft, rgt;
  struct Pending {
    Real u, v;
    std::vector<Real> whole;
    int depth;
  };
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const Real factor = w.deformation_at(0.5 * (grid[k] + grid[k + 1]));
    std::vector<Pending> stack;
    eng.panel(Real(grid[k]), Real(grid[k + 1]), factor, false, whole);
    stack.push_back({Real(grid[k]), Real(grid[k + 1]), whole, 0});
    // Depth-first, left half first, so the summation order is fixed.
    while (!stack.empty()) {
      Pending p = std::move(stack.back());
      stack.pop_back();
      const Real mid = (p.u + p.v) / 2;
      eng.panel(p.u, mid, factor, false, lft);
      eng.panel(mid, p.v, factor, false, rgt);
      const double frac = static_cast<double>(p.v - p.u) / total;
      bool ok = true;
      std::vector<double> diff(n);
      for (std::size_t i = 0; i < n; ++i) {
        diff[i] = static_cast<double>(abs(p.whole[i] - lft[i] - rgt[i]));
        if (diff[i] > 0.5 * tol[i] * frac) ok = false;
      }
      if (ok) {
        for (std::size_t i = 0; i < n; ++i) {
          res.value[i] += lft[i] + rgt[i];
          res.error[i] += diff[i];
        }
        ++res.panels;
        continue;
      }
      if (p.depth + 1 > opts.max_depth)
        throw QuadratureError("quadrature did not converge on [" + std::to_string(static_cast<double>(p.u)) + "," +
                              std::to_string(static_cast<double>(p.v)) + "] for weight '" + w.key() + "'");
      stack.push_back({mid, p.v, rgt, p.depth + 1});
      stack.push_back({p.u, mid, lft, p.depth + 1});
    }
  }
  return res;
}

ScalarIntegral integrate(const Weight& w, const std::function<Real(const Real&)>& f, double tol, GrowthHint hint,
                         std::vector<double> breakpoints) {
  QuadratureOptions opts;
  opts.rel_tol = 0.0;
  opts.abs_tol = tol;
  opts.breakpoints = std::move(breakpoints);
  if (hint.scale.empty()) hint.scale = {1.0};
  const auto r = integrate_family(w, 1, [&f](const Real& x, Real* out) { out[0] = f(x); }, hint, opts);
  return {r.value[0], r.error[0]};
}

}  // namespace rmxs

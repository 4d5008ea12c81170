#include "rmxs/weights.hpp"

#include "rmxs/errors.hpp"
#include "rmxs/quadrature.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace rmxs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Real& log_sqrt_two_pi() {
  static const Real v = log(boost::math::constants::two_pi<Real>()) / 2;
  return v;
}

template <class T>
T horner(const std::vector<Rational>& c, const T& x) {
  T acc(0);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + T(to_double(c[k]));
  return acc;
}

Real horner_exact(const std::vector<Rational>& c, const Real& x) {
  Real acc(0);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + to_real(c[k]);
  return acc;
}

constexpr int kMomentFamily = 24;

struct MomentCache {
  std::mutex mu;
  std::map<std::pair<std::string, int>, std::vector<MomentValue>> table;
};

MomentCache& moment_cache() {
  static MomentCache c;
  return c;
}

std::vector<Rational> derivative(const std::vector<Rational>& c) {
  std::vector<Rational> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<long>(k));
  return d;
}

}  // namespace

Weight Weight::gaussian() {
  Weight w;
  w.kind_ = WeightKind::Gaussian;
  return w;
}

Weight Weight::laguerre() {
  Weight w;
  w.kind_ = WeightKind::Laguerre;
  return w;
}

Weight Weight::exp_poly(std::vector<Rational> v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  if (v.size() < 3 || (v.size() - 1) % 2 != 0 || v.back() <= 0)
    throw PreconditionError("exp-poly weight needs V of even degree >= 2 with positive leading coefficient");
  Weight w;
  w.kind_ = WeightKind::ExpPoly;
  w.v_ = std::move(v);
  return w;
}

double Weight::support_lo() const { return base().kind_ == WeightKind::Laguerre ? 0.0 : -kInf; }

Real Weight::log_base_density(const Real& x) const {
  switch (base().kind_) {
    case WeightKind::Gaussian: return -x * x / 2 - log_sqrt_two_pi();
    case WeightKind::Laguerre: return -x;
    case WeightKind::ExpPoly: return -horner_exact(base().v_, x);
    case WeightKind::Deformed: break;
  }
  throw PreconditionError("malformed weight");
}

double Weight::log_base_density(double x) const {
  switch (base().kind_) {
    case WeightKind::Gaussian: return -x * x / 2 - 0.5 * std::log(2 * M_PI);
    case WeightKind::Laguerre: return -x;
    case WeightKind::ExpPoly: return -horner(base().v_, x);
    case WeightKind::Deformed: break;
  }
  throw PreconditionError("malformed weight");
}

double Weight::log_base_slope(double x) const {
  switch (base().kind_) {
    case WeightKind::Gaussian: return -x;
    case WeightKind::Laguerre: return -1.0;
    case WeightKind::ExpPoly: return -horner(derivative(base().v_), x);
    case WeightKind::Deformed: break;
  }
  throw PreconditionError("malformed weight");
}

double Weight::concave_beyond() const {
  if (base().kind_ != WeightKind::ExpPoly) return 0.0;
  // Cauchy bound on the real roots of V''.
  const auto v2 = derivative(derivative(base().v_));
  double bound = 0.0;
  const double lead = to_double(v2.back());
  for (std::size_t k = 0; k + 1 < v2.size(); ++k) bound = std::max(bound, std::fabs(to_double(v2[k]) / lead));
  return v2.size() > 1 ? 1.0 + bound : 0.0;
}

Real Weight::deformation_at(double x) const {
  if (kind_ != WeightKind::Deformed || !region_.contains(x)) return Real(1);
  return Real(1) - to_real(s_);
}

Real Weight::density(const Real& x) const {
  if (x < support_lo()) return Real(0);
  return exp(log_base_density(x)) * deformation_at(static_cast<double>(x));
}

std::string Weight::key() const {
  switch (kind_) {
    case WeightKind::Gaussian: return "gaussian";
    case WeightKind::Laguerre: return "laguerre";
    case WeightKind::ExpPoly: {
      std::string out = "exppoly[";
      for (std::size_t k = 0; k < v_.size(); ++k) out += (k ? "," : "") + to_string(v_[k]);
      return out + "]";
    }
    case WeightKind::Deformed: return base_->key() + "|E=" + region_.str() + "|s=" + to_string(s_);
  }
  return "?";
}

Weight deform_weight(const Weight& w, const IntervalSet& e, const Rational& s) {
  if (w.kind() == WeightKind::Deformed) throw PreconditionError("cannot deform an already deformed weight");
  std::vector<Interval> clipped;
  const double lo = w.support_lo();
  for (const auto& p : e.pieces()) clipped.push_back({std::max(p.lo, lo), p.hi});
  IntervalSet region(std::move(clipped));
  if (s == 0 || region.empty()) return w;
  Weight d;
  d.kind_ = WeightKind::Deformed;
  d.base_ = std::make_shared<const Weight>(w);
  d.region_ = std::move(region);
  d.s_ = s;
  return d;
}

Rational exact_moment(const Weight& w, int j) {
  if (j < 0) throw PreconditionError("moment index must be non-negative");
  switch (w.kind()) {
    case WeightKind::Gaussian: {
      if (j % 2 == 1) return Rational(0);
      Rational r = 1;
      for (int k = j - 1; k > 1; k -= 2) r *= k;
      return r;
    }
    case WeightKind::Laguerre: return factorial_rational(j);
    default: throw PreconditionError("weight '" + w.key() + "' has no closed-form moments");
  }
}

std::vector<MomentValue> moments(const Weight& w, int jmax) {
  if (jmax < 0) throw PreconditionError("moment index must be non-negative");
  std::vector<MomentValue> out;
  if (w.exact_moments()) {
    for (int j = 0; j <= jmax; ++j) out.push_back({to_real(exact_moment(w, j)), 0.0, true});
    return out;
  }
  if (w.kind() == WeightKind::Deformed && w.base().exact_moments() &&
      w.region().covers(w.support_lo(), kInf)) {
    const Rational f = Rational(1) - w.strength();
    for (int j = 0; j <= jmax; ++j) out.push_back({to_real(f * exact_moment(w.base(), j)), 0.0, true});
    return out;
  }
  // One fixed-size family per weight, so a value never depends on which
  // request computed it first.
  const int family = std::max(jmax, kMomentFamily);
  auto& c = moment_cache();
  const auto key = std::make_pair(w.key(), family);
  {
    std::lock_guard<std::mutex> lock(c.mu);
    if (auto it = c.table.find(key); it != c.table.end())
      return std::vector<MomentValue>(it->second.begin(), it->second.begin() + jmax + 1);
  }
  const int jtop = family;
  const std::size_t n = static_cast<std::size_t>(family) + 1;
  const auto res = integrate_family(
      w, n,
      [n](const Real& x, Real* f) {
        Real p(1);
        for (std::size_t j = 0; j < n; ++j) {
          f[j] = p;
          p *= x;
        }
      },
      GrowthHint{jtop, 0.0, {}});
  for (std::size_t j = 0; j < n; ++j) out.push_back({res.value[j], res.error[j], false});
  {
    std::lock_guard<std::mutex> lock(c.mu);
    c.table.emplace(key, out);
  }
  out.resize(static_cast<std::size_t>(jmax) + 1);
  return out;
}

MomentValue moment(const Weight& w, int j) { return moments(w, j).back(); }

void clear_moment_cache() {
  auto& c = moment_cache();
  std::lock_guard<std::mutex> lock(c.mu);
  c.table.clear();
}

}  // namespace rmxs

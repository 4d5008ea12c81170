#include "rmxs/matrix_model.hpp"

#include "rmxs/errors.hpp"
#include "rmxs/linalg.hpp"
#include "rmxs/ortho.hpp"
#include "rmxs/quadrature.hpp"
#include "rmxs/schur.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace rmxs {

namespace {

struct PowerCache {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<PowerIntegrals>> table;
};

PowerCache& power_cache() {
  static PowerCache c;
  return c;
}

double rel(double err, const Real& v) {
  const double m = std::fabs(static_cast<double>(v));
  if (err == 0.0) return 0.0;
  return m > 0 ? err / m : 1.0;
}

// Pairwise gaps between the listed sources and between each source and 0.
double source_gap(const std::vector<Rational>& a) {
  std::vector<Rational> pts = a;
  pts.push_back(Rational(0));
  return min_pairwise_gap(pts);
}

Real power(const Real& x, int k) {
  Real p = 1;
  for (int i = 0; i < k; ++i) p *= x;
  return p;
}

void require_undeformed(const Weight& w) {
  if (w.kind() == WeightKind::Deformed)
    throw PreconditionError("the model weight must be undeformed; pass E and s in the query");
}

struct DetValue {
  Real value;
  double noise;
  double condition;
};

DetValue determinant(const DenseMatrix<Real>& m, const DenseMatrix<double>& err) {
  const auto r = det_pivoted(m, &err);
  if (r.value == 0) {
    bool exact = true;
    for (std::size_t i = 0; i < err.rows(); ++i)
      for (std::size_t j = 0; j < err.cols(); ++j) exact = exact && err(i, j) == 0.0;
    return {Real(0), exact ? 0.0 : 1.0, r.condition};
  }
  return {r.value, r.noise, r.condition};
}

}  // namespace

void SourceModel::validate() const {
  if (d < 1 || d > kMaxDimension)
    throw PreconditionError("dimension d=" + std::to_string(d) + " outside [1," + std::to_string(kMaxDimension) + "]");
  int total = 0;
  std::vector<double> values;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& s = sources[i];
    if (s.multiplicity < 1) throw PreconditionError("source multiplicity must be >= 1");
    if (s.a == 0) throw PreconditionError("listed sources must be nonzero (zeros are implicit)");
    for (std::size_t j = 0; j < i; ++j)
      if (sources[j].a == s.a)
        throw PreconditionError("source " + to_string(s.a) + " listed twice; use a multiplicity instead");
    const double ad = to_double(s.a);
    if (!(ad < weight.max_tilt()) || !(-ad < weight.max_tilt() || weight.support_lo() == 0.0))
      throw PreconditionError("source a=" + to_string(s.a) + " makes e^{a x} W non-integrable for weight '" +
                              weight.key() + "'");
    total += s.multiplicity;
    values.push_back(ad);
  }
  if (total > d) throw PreconditionError("more source eigenvalues than the dimension");
  if (total < d) values.push_back(0.0);
  if (values.size() > 1 && min_pairwise_gap(values) < kNearConfluentGap)
    throw NearConfluent("sources closer than " + std::to_string(kNearConfluentGap) +
                        "; merge them into one source with a multiplicity");
}

std::string SourceModel::str() const {
  std::string out = "d=" + std::to_string(d) + " a=(";
  for (std::size_t i = 0; i < sources.size(); ++i) {
    out += (i ? "," : "") + to_string(sources[i].a);
    if (sources[i].multiplicity > 1) out += "^" + std::to_string(sources[i].multiplicity);
  }
  return out + ") W=" + weight.key();
}

const PowerIntegrals& power_integrals(const Weight& w, const Rational& y) {
  const std::string key = w.key() + "#" + to_string(y);
  auto& c = power_cache();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    if (auto it = c.table.find(key); it != c.table.end()) return *it->second;
  }
  auto out = std::make_shared<PowerIntegrals>();
  if (y == 0) {
    for (const auto& m : moments(w, kPowerFamily - 1)) {
      out->value.push_back(m.value);
      out->error.push_back(m.error);
    }
  } else {
    const Real yr = to_real(y);
    const auto r = integrate_family(
        w, kPowerFamily,
        [&yr](const Real& x, Real* f) {
          Real p = exp(yr * x);
          for (int n = 0; n < kPowerFamily; ++n) {
            f[n] = p;
            p *= x;
          }
        },
        GrowthHint{kPowerFamily - 1, to_double(y), {}});
    out->value = r.value;
    out->error = r.error;
  }
  std::lock_guard<std::mutex> lock(c.mu);
  return *c.table.emplace(key, std::move(out)).first->second;
}

Estimate partition_fn(const SourceModel& model, const ModelOptions& opts) {
  model.validate();
  struct Group {
    Rational y;
    int m;
  };
  std::vector<Group> groups;
  for (const auto& s : model.sources) groups.push_back({s.a, s.multiplicity});
  // Canonical order makes the value exactly invariant under source permutations.
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) { return a.y < b.y; });
  int listed = 0;
  for (const auto& g : groups) listed += g.m;
  if (listed < model.d) groups.push_back({Rational(0), model.d - listed});

  const auto n = static_cast<std::size_t>(model.d);
  DenseMatrix<Real> m(n, n, Real(0));
  DenseMatrix<double> err(n, n, 0.0);
  const bool corrupt = opts.corrupt_deformed_moment && model.weight.kind() == WeightKind::Deformed;
  std::size_t col = 0;
  for (const auto& g : groups) {
    const auto& pw = power_integrals(model.weight, g.y);
    for (int p = 0; p < g.m; ++p, ++col) {
      const Real pf = factorial_real(p);
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t k = r + static_cast<std::size_t>(p);
        Real v = pw.value[k];
        if (corrupt && k == 0) v += 1;
        m(r, col) = v / pf;
        err(r, col) = pw.error[k] / static_cast<double>(pf);
      }
    }
  }
  const DetValue det = determinant(m, err);
  Real vconf = 1;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t h = g + 1; h < groups.size(); ++h)
      vconf *= power(to_real(groups[h].y - groups[g].y), groups[g].m * groups[h].m);
  return {factorial_real(model.d) * det.value / vconf, det.noise, det.condition};
}

Estimate rank1_partition_fn(const Weight& w, int l, const Rational& a) {
  if (a == 0) throw PreconditionError("rank1_partition_fn needs a nonzero source");
  SourceModel{l, {{a, 1}}, w}.validate();
  const OrthoBasis b = orthonormal_basis(w, l);
  const Real ar = to_real(a);
  const auto& t = tilted_monic_integrals(b, ar);
  const auto k = static_cast<std::size_t>(l - 1);
  const Real gamma = t.value[k] / sqrt(b.norm(l - 1));
  return {factorial_real(l) * gamma / power(ar, l - 1), rel(t.error[k], t.value[k]), 0.0};
}

Estimate rank1_ratio(const Weight& w, int l, const Rational& a) {
  if (l < 1 || l > kMaxDimension) throw PreconditionError("rank-1 dimension out of range");
  if (a == 0) return {Real(1), 0.0, 0.0};
  const OrthoBasis b = monic_basis(w, l);
  const Real ar = to_real(a);
  const auto& t = tilted_monic_integrals(b, ar);
  const auto k = static_cast<std::size_t>(l - 1);
  const Real v = factorial_real(l - 1) * t.value[k] / (power(ar, l - 1) * b.norm(l - 1));
  return {v, rel(t.error[k], t.value[k]), 0.0};
}

Estimate expectation(const ExpectationQuery& q, const ModelOptions& opts) {
  require_undeformed(q.model.weight);
  SourceModel deformed = q.model;
  deformed.weight = deform_weight(q.model.weight, q.region, q.s);
  const Estimate num = partition_fn(deformed, opts);
  const Estimate den = partition_fn(q.model, opts);
  if (den.value == 0) throw SingularDeterminant("Z_d vanishes for " + q.model.str());
  return {num.value / den.value, num.noise + den.noise, std::max(num.condition, den.condition)};
}

Estimate normalized_expectation(const ExpectationQuery& q, const ModelOptions& opts) {
  const Estimate num = expectation(q, opts);
  ExpectationQuery zero = q;
  zero.model.sources.clear();
  const Estimate den = expectation(zero, opts);
  if (den.value == 0)
    throw PreconditionError("E_d(E;s) vanishes (E=" + q.region.str() + ", s=" + to_string(q.s) +
                            "); the normalized expectation is undefined");
  return {num.value / den.value, num.noise + den.noise, std::max(num.condition, den.condition)};
}

namespace {

struct RhsParts {
  Estimate value;
  double den_det = 0.0;
};

RhsParts rank_reduction_parts(const ExpectationQuery& q) {
  const SourceModel& model = q.model;
  require_undeformed(model.weight);
  model.validate();
  const std::size_t m = model.sources.size();
  for (const auto& s : model.sources)
    if (s.multiplicity != 1) throw PreconditionError("rank reduction needs simple (multiplicity 1) sources");
  if (m == 0) return {{Real(1), 0.0, 0.0}, 1.0};
  const int d = model.d;
  const Weight& w = model.weight;
  const Weight wp = deform_weight(w, q.region, q.s);
  const OrthoBasis basis = orthonormal_basis(w, d);
  DenseMatrix<Real> num(m, m, Real(0)), den(m, m, Real(0));
  DenseMatrix<double> num_err(m, m, 0.0), den_err(m, m, 0.0);
  for (std::size_t j = 1; j <= m; ++j)
    for (std::size_t k = 1; k <= m; ++k) {
      const Rational& a = model.sources[k - 1].a;
      const int idx = d - static_cast<int>(j);
      const int l = idx + 1;
      const auto& t = tilted_monic_integrals(basis, to_real(a));
      const Real gamma = t.value[static_cast<std::size_t>(idx)] / sqrt(basis.norm(idx));
      const double gamma_rel = rel(t.error[static_cast<std::size_t>(idx)], t.value[static_cast<std::size_t>(idx)]);
      const Estimate deformed = rank1_ratio(wp, l, a);
      const Estimate plain = rank1_ratio(w, l, a);
      const Real ebar = deformed.value / plain.value;
      den(j - 1, k - 1) = gamma;
      den_err(j - 1, k - 1) = static_cast<double>(abs(gamma)) * gamma_rel;
      num(j - 1, k - 1) = gamma * ebar;
      num_err(j - 1, k - 1) = static_cast<double>(abs(gamma * ebar)) * (gamma_rel + deformed.noise + plain.noise);
    }
  const DetValue dn = determinant(num, num_err);
  const DetValue dd = determinant(den, den_err);
  if (dd.value == 0) throw SingularDeterminant("det[Gamma_{d-j}(a_k)] vanishes for " + model.str());
  return {{dn.value / dd.value, dn.noise + dd.noise, std::max(dn.condition, dd.condition)},
          std::fabs(static_cast<double>(dd.value))};
}

}  // namespace

Estimate rank_reduction_rhs(const ExpectationQuery& q) { return rank_reduction_parts(q).value; }

IdentityReport make_report(const Estimate& lhs, const Estimate& rhs) {
  IdentityReport r;
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  r.abs_err = static_cast<double>(abs(lhs.value - rhs.value));
  const double scale = std::max({std::fabs(static_cast<double>(lhs.value)), std::fabs(static_cast<double>(rhs.value)), 1e-300});
  r.rel_err = r.abs_err / scale;
  r.noise = lhs.noise + rhs.noise;
  r.condition = std::max(lhs.condition, rhs.condition);
  return r;
}

IdentityReport verify_main_identity(const ExpectationQuery& q, const ModelOptions& opts) {
  q.model.validate();
  const Estimate lhs = normalized_expectation(q, opts);
  const RhsParts rhs = rank_reduction_parts(q);
  IdentityReport r = make_report(lhs, rhs.value);
  std::vector<Rational> a;
  for (const auto& s : q.model.sources) a.push_back(s.a);
  r.min_gap = source_gap(a);
  r.det_magnitude = rhs.den_det;
  return r;
}

IdentityReport z_ratio_det_check(const Weight& w, int d, const std::vector<Rational>& a, const ModelOptions& opts) {
  SourceModel model{d, {}, w};
  for (const auto& x : a) model.sources.push_back({x, 1});
  model.validate();
  const Estimate za = partition_fn(model, opts);
  const Estimate z0 = partition_fn(SourceModel{d, {}, w}, opts);
  if (z0.value == 0) throw SingularDeterminant("Z_d vanishes for weight '" + w.key() + "'");
  const Estimate lhs{za.value / z0.value, za.noise + z0.noise, std::max(za.condition, z0.condition)};

  const std::size_t m = a.size();
  DenseMatrix<Real> mat(m, m, Real(0));
  DenseMatrix<double> err(m, m, 0.0);
  for (std::size_t j = 1; j <= m; ++j)
    for (std::size_t k = 1; k <= m; ++k) {
      const Real ak = to_real(a[k - 1]);
      const Estimate r1 = rank1_ratio(w, d + 1 - static_cast<int>(j), a[k - 1]);
      const Real v = power(ak, static_cast<int>(m - j)) * r1.value;
      mat(j - 1, k - 1) = v;
      err(j - 1, k - 1) = static_cast<double>(abs(v)) * r1.noise;
    }
  const DetValue det = determinant(mat, err);
  Real delta = 1;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k) delta *= to_real(a[j] - a[k]);
  const Estimate rhs{det.value / delta, det.noise, det.condition};
  IdentityReport r = make_report(lhs, rhs);
  r.min_gap = source_gap(a);
  r.det_magnitude = std::fabs(static_cast<double>(det.value));
  return r;
}

void clear_caches() {
  {
    auto& c = power_cache();
    std::lock_guard<std::mutex> lock(c.mu);
    c.table.clear();
  }
  clear_ortho_caches();
  clear_moment_cache();
}

}  // namespace rmxs

#include "rmxs/ortho.hpp"

#include "rmxs/errors.hpp"
#include "rmxs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace rmxs {

namespace {

// LDL^T of the Hankel matrix H = [M_{i+j}]_{i,j<=n}; returns the rows of
// L^{-1} (monic orthogonal polynomial coefficients) and D (their norms).
template <class F>
void hankel_ldl(const std::vector<F>& m, int n, std::vector<std::vector<F>>& linv, std::vector<F>& d) {
  const std::size_t size = static_cast<std::size_t>(n) + 1;
  std::vector<std::vector<F>> l(size, std::vector<F>(size, F(0)));
  d.assign(size, F(0));
  for (std::size_t j = 0; j < size; ++j) {
    F djj = m[2 * j];
    for (std::size_t k = 0; k < j; ++k) djj -= l[j][k] * l[j][k] * d[k];
    d[j] = djj;
    l[j][j] = F(1);
    if (FieldTraits<F>::is_zero(djj)) {
      // Remaining entries are left at zero; the caller rejects this basis.
      for (std::size_t i = j + 1; i < size; ++i) l[i][j] = F(0);
      continue;
    }
    for (std::size_t i = j + 1; i < size; ++i) {
      F v = m[i + j];
      for (std::size_t k = 0; k < j; ++k) v -= l[i][k] * l[j][k] * d[k];
      l[i][j] = v / djj;
    }
  }
  // Forward substitution for L^{-1} (unit lower triangular).
  linv.assign(size, std::vector<F>(size, F(0)));
  for (std::size_t i = 0; i < size; ++i) {
    linv[i][i] = F(1);
    for (std::size_t j = 0; j < i; ++j) {
      F v(0);
      for (std::size_t k = j; k < i; ++k) v -= l[i][k] * linv[k][j];
      linv[i][j] = v;
    }
  }
}

struct Caches {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<TiltedIntegrals>> tilted;
};

Caches& caches() {
  static Caches c;
  return c;
}

}  // namespace

Real OrthoBasis::coeff(int k, int i) const {
  if (!positive_) throw HankelNotPD("orthonormal coefficients need positive norms");
  return monic_coeff(k, i) / sqrt(norm(k));
}

Real OrthoBasis::leading(int k) const { return coeff(k, k); }

std::vector<Real> OrthoBasis::monic_values(const Real& x) const {
  std::vector<Real> v(static_cast<std::size_t>(n_) + 1);
  v[0] = 1;
  if (n_ >= 1) v[1] = x - alpha_[0];
  for (int k = 1; k < n_; ++k)
    v[static_cast<std::size_t>(k) + 1] =
        (x - alpha_[static_cast<std::size_t>(k)]) * v[static_cast<std::size_t>(k)] -
        beta_[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k) - 1];
  return v;
}

Real OrthoBasis::eval(int k, const Real& x) const {
  if (k < 0 || k > n_) throw PreconditionError("polynomial index out of range");
  if (!positive_) throw HankelNotPD("orthonormal polynomials need positive norms");
  return monic_values(x)[static_cast<std::size_t>(k)] / sqrt(norm(k));
}

double OrthoBasis::monic_coeff_sum(int k) const {
  double s = 0.0;
  for (int i = 0; i <= k; ++i) s += std::fabs(static_cast<double>(monic_coeff(k, i)));
  return s;
}

OrthoBasis build_basis(const Weight& w, int n, bool require_positive) {
  if (n < 1) throw PreconditionError("basis size must be >= 1");
  OrthoBasis b;
  b.weight_ = w;
  b.n_ = n;
  const auto mv = moments(w, 2 * n);
  std::vector<std::vector<Real>> linv;
  std::vector<Real> d;
  bool exact = true;
  for (const auto& m : mv) exact = exact && m.exact;
  if (exact && (w.exact_moments() || (w.kind() == WeightKind::Deformed && w.base().exact_moments()))) {
    // Rational path: recover the exact moments and factor without rounding.
    std::vector<Rational> mq;
    const Rational f = w.kind() == WeightKind::Deformed ? Rational(1) - w.strength() : Rational(1);
    for (int j = 0; j <= 2 * n; ++j) mq.push_back(f * exact_moment(w.base(), j));
    std::vector<std::vector<Rational>> lq;
    std::vector<Rational> dq;
    hankel_ldl(mq, n, lq, dq);
    for (int k = 0; k <= n; ++k) {
      if (dq[static_cast<std::size_t>(k)] == 0 || (require_positive && dq[static_cast<std::size_t>(k)] < 0))
        throw HankelNotPD("Hankel moment matrix of '" + w.key() + "' is not positive definite at order " +
                          std::to_string(k));
    }
    linv.assign(lq.size(), {});
    for (std::size_t i = 0; i < lq.size(); ++i)
      for (const auto& q : lq[i]) linv[i].push_back(to_real(q));
    for (const auto& q : dq) d.push_back(to_real(q));
  } else {
    std::vector<Real> mr;
    for (const auto& m : mv) mr.push_back(m.value);
    hankel_ldl(mr, n, linv, d);
    for (int k = 0; k <= n; ++k) {
      const Real dk = d[static_cast<std::size_t>(k)];
      // Pivot is noise if it is tiny next to the diagonal moment it came from.
      const Real floor = Real(1e-24) * abs(mr[2 * static_cast<std::size_t>(k)]);
      if (abs(dk) <= floor || (require_positive && dk <= 0))
        throw HankelNotPD("Hankel moment matrix of '" + w.key() + "' is not positive definite at order " +
                          std::to_string(k));
    }
  }
  b.monic_ = std::move(linv);
  b.h_ = std::move(d);
  b.positive_ = true;
  for (const auto& h : b.h_) b.positive_ = b.positive_ && h > 0;
  b.alpha_.assign(static_cast<std::size_t>(n), Real(0));
  b.beta_.assign(static_cast<std::size_t>(n) + 1, Real(0));
  for (int k = 0; k < n; ++k) {
    const Real below = k > 0 ? b.monic_coeff(k, k - 1) : Real(0);
    b.alpha_[static_cast<std::size_t>(k)] = below - b.monic_coeff(k + 1, k);
  }
  for (int k = 1; k <= n; ++k) b.beta_[static_cast<std::size_t>(k)] = b.norm(k) / b.norm(k - 1);
  return b;
}

OrthoBasis orthonormal_basis(const Weight& w, int n) { return build_basis(w, n, true); }

OrthoBasis monic_basis(const Weight& w, int n) { return build_basis(w, n, false); }

const TiltedIntegrals& tilted_monic_integrals(const OrthoBasis& b, const Real& a) {
  const std::string key = b.weight().key() + "#" + std::to_string(b.degree()) + "#" + to_string(a);
  auto& c = caches();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    if (auto it = c.tilted.find(key); it != c.tilted.end()) return *it->second;
  }
  const int n = b.degree();
  GrowthHint hint;
  hint.degree = n - 1;
  hint.rate = static_cast<double>(a);
  for (int k = 0; k < n; ++k) hint.scale.push_back(b.monic_coeff_sum(k));
  const auto r = integrate_family(
      b.weight(), static_cast<std::size_t>(n),
      [&b, &a, n](const Real& x, Real* out) {
        const Real e = exp(a * x);
        const auto v = b.monic_values(x);
        for (int k = 0; k < n; ++k) out[k] = v[static_cast<std::size_t>(k)] * e;
      },
      hint);
  auto t = std::make_shared<TiltedIntegrals>(TiltedIntegrals{r.value, r.error});
  std::lock_guard<std::mutex> lock(c.mu);
  return *c.tilted.emplace(key, std::move(t)).first->second;
}

Real gamma_coeff(const OrthoBasis& b, int j, const Real& a) {
  if (j < 0 || j >= b.degree()) throw PreconditionError("gamma_coeff: index outside the basis");
  if (!b.positive()) throw HankelNotPD("gamma_coeff needs an orthonormal basis");
  return tilted_monic_integrals(b, a).value[static_cast<std::size_t>(j)] / sqrt(b.norm(j));
}

double gram_defect(const OrthoBasis& b) {
  const int n = b.degree();
  const auto nn = static_cast<std::size_t>(n);
  const auto r = integrate_family(
      b.weight(), nn * nn,
      [&b, n, nn](const Real& x, Real* out) {
        std::vector<Real> p(nn, Real(0));
        for (int k = 0; k < n; ++k) {
          Real acc = 0;
          for (int i = k; i >= 0; --i) acc = acc * x + b.coeff(k, i);
          p[static_cast<std::size_t>(k)] = acc;
        }
        for (std::size_t j = 0; j < nn; ++j)
          for (std::size_t k = 0; k < nn; ++k) out[j * nn + k] = p[j] * p[k];
      },
      GrowthHint{2 * n, 0.0, {}});
  double worst = 0;
  for (std::size_t j = 0; j < nn; ++j)
    for (std::size_t k = 0; k < nn; ++k) {
      const Real dev = r.value[j * nn + k] - (j == k ? Real(1) : Real(0));
      worst = std::max(worst, std::fabs(static_cast<double>(dev)));
    }
  return worst;
}

void clear_ortho_caches() {
  auto& c = caches();
  std::lock_guard<std::mutex> lock(c.mu);
  c.tilted.clear();
}

}  // namespace rmxs

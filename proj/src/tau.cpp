#include "rmxs/tau.hpp"

#include "rmxs/errors.hpp"
#include "rmxs/linalg.hpp"
#include "rmxs/schur.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace rmxs {

namespace {

struct TauCache {
  std::mutex mu;
  std::map<std::string, QSeries> zhat;
  std::map<std::string, QSeries> schur;
  std::map<int, std::shared_ptr<const std::vector<QSeries>>> h_tables;
};

TauCache& tau_cache() {
  static TauCache c;
  return c;
}

std::shared_ptr<const std::vector<QSeries>> h_table(int cap) {
  auto& c = tau_cache();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    if (auto it = c.h_tables.find(cap); it != c.h_tables.end()) return it->second;
  }
  auto t = std::make_shared<const std::vector<QSeries>>(elementary_schur_table<Rational>(cap));
  std::lock_guard<std::mutex> lock(c.mu);
  return c.h_tables.emplace(cap, std::move(t)).first->second;
}

// s_kappa(t) by Jacobi-Trudi over the series ring.
QSeries schur_series(const Partition& kappa, int cap) {
  const std::string key = std::to_string(cap) + "#" + kappa.str();
  auto& c = tau_cache();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    if (auto it = c.schur.find(key); it != c.schur.end()) return it->second;
  }
  const auto h = h_table(cap);
  const QSeries zero(cap);
  const auto l = static_cast<std::size_t>(kappa.length());
  DenseMatrix<QSeries> m(l, l, zero);
  for (int p = 1; p <= kappa.length(); ++p)
    for (int q = 1; q <= kappa.length(); ++q) {
      const int k = kappa.part(p) - p + q;
      if (k >= 0 && k <= cap) m(static_cast<std::size_t>(p - 1), static_cast<std::size_t>(q - 1)) = (*h)[static_cast<std::size_t>(k)];
    }
  QSeries s = det_expand(m, zero, QSeries::constant(Rational(1), cap));
  std::lock_guard<std::mutex> lock(c.mu);
  return c.schur.emplace(key, std::move(s)).first->second;
}

QSeries shift(const QSeries& f, std::initializer_list<Rational> points, int sign = +1, Block b = Block::T) {
  std::vector<MiwaPoint<Rational>> p;
  for (const auto& c : points) p.push_back({c, sign});
  return miwa_shift(f, p, b);
}

// Coefficients of x^0..x^n of a shifted series, each cut to `cap`.
std::vector<QSeries> x_powers(const QSeries& f, int n, int cap) {
  std::vector<QSeries> out;
  for (int r = 0; r <= n; ++r) out.push_back(extract_power(f, Var::aux(), r).with_cap(cap));
  return out;
}

void require_index(const TauConfig& cfg, int d) {
  if (d < 0 || d > cfg.dmax)
    throw PreconditionError("tau index d=" + std::to_string(d) + " outside [0," + std::to_string(cfg.dmax) + "]");
}

}  // namespace

void TauConfig::validate() const {
  if (!weight.exact_moments())
    throw PreconditionError("tau vector needs a weight with exact moments, got '" + weight.key() + "'");
  if (D < 1) throw PreconditionError("tau cap D must be >= 1");
  if (dmax < 1) throw PreconditionError("tau dmax must be >= 1");
}

std::string TauConfig::key() const { return weight.key() + (corrupt_m4 ? "#M4+1" : ""); }

Rational tau_moment(const TauConfig& cfg, int j) {
  Rational m = exact_moment(cfg.weight, j);
  if (cfg.corrupt_m4 && j == 4) m += 1;
  return m;
}

Rational zhat_coefficient(const TauConfig& cfg, int d, const Partition& kappa) {
  if (kappa.length() > d) return Rational(0);
  const auto n = static_cast<std::size_t>(d);
  DenseMatrix<Rational> m(n, n, Rational(0));
  Rational denom = 1;
  for (int p = 1; p <= d; ++p) {
    for (int q = 1; q <= d; ++q)
      m(static_cast<std::size_t>(p - 1), static_cast<std::size_t>(q - 1)) = tau_moment(cfg, kappa.part(p) + d - p + q - 1);
    denom *= factorial_rational(kappa.part(p) + d - p);
  }
  return det_exact(m) / denom;
}

QSeries zhat_series(const TauConfig& cfg, int d, int cap) {
  cfg.validate();
  require_index(cfg, d);
  if (cap < 0) cap = cfg.D;
  if (d == 0) return QSeries::constant(Rational(1), cap);
  const std::string key = cfg.key() + "#" + std::to_string(d) + "#" + std::to_string(cap);
  auto& c = tau_cache();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    if (auto it = c.zhat.find(key); it != c.zhat.end()) return it->second;
  }
  QSeries z(cap);
  for (const Partition& kappa : partitions(d, cap)) {
    const Rational coeff = zhat_coefficient(cfg, d, kappa);
    if (coeff != 0) z += schur_series(kappa, cap) * coeff;
  }
  std::lock_guard<std::mutex> lock(c.mu);
  return c.zhat.emplace(key, std::move(z)).first->second;
}

Rational zhat_eval(const TauConfig& cfg, int d, const std::vector<Rational>& a, int max_weight) {
  cfg.validate();
  require_index(cfg, d);
  if (d == 0) return Rational(1);
  Rational sum = 0;
  for (const Partition& kappa : partitions(d, max_weight)) sum += zhat_coefficient(cfg, d, kappa) * schur_poly(kappa, a);
  return sum;
}

Rational zhat_mirror_eval(const TauConfig& cfg, int d, const std::vector<Rational>& a) {
  std::vector<MiwaPoint<Rational>> points;
  for (const auto& c : a) points.push_back({c, -1});
  return miwa_eval(zhat_series(cfg, d), points);
}

SeriesSlice vertex_apply_to(const TauConfig& cfg, const QSeries& f, int d, int zlo, int zhi) {
  cfg.validate();
  const int D = cfg.D;
  if (f.cap() < D + d)
    throw InsufficientWindow("vertex operator on index " + std::to_string(d) + " needs the series at cap " +
                             std::to_string(D + d) + ", got " + std::to_string(f.cap()));
  // Weight-preserving shift: a term x^r t^w of the (D+d)-capped result is
  // exact for w <= D whenever r <= d.
  const QSeries shifted = shift(f.with_cap(D + d), {Rational(1)}, -1);
  const auto y = x_powers(shifted, d, D);
  for (int r = d + 1; r <= D + d; ++r)
    if (!extract_power(shifted, Var::aux(), r).is_zero())
      throw Error("tau component " + std::to_string(d) + " shifted by -[1/z] has a z^-" + std::to_string(r) + " term");
  const auto h = h_table(D);
  const QSeries zero(D);
  SeriesSlice full(-d, D, zero);
  for (int p = -d; p <= D; ++p) {
    QSeries acc(D);
    for (int r = 0; r <= d; ++r)
      if (p + r >= 0 && p + r <= D) acc += (*h)[static_cast<std::size_t>(p + r)] * y[static_cast<std::size_t>(r)];
    full.set(p, std::move(acc));
  }
  if (zhi < zlo) throw PreconditionError("vertex operator: empty z window");
  SeriesSlice out(zlo, zhi, zero, zlo <= -d, zhi >= D);
  for (int p = zlo; p <= zhi; ++p)
    if (p >= -d && p <= D) out.set(p, full.at(p));
  return out;
}

SeriesSlice vertex_apply(const TauConfig& cfg, int d, int zlo, int zhi) {
  require_index(cfg, d);
  return vertex_apply_to(cfg, zhat_series(cfg, d, cfg.D + d), d, zlo, zhi);
}

SeriesSlice nu_slice(const TauConfig& cfg, int d, int lo, int hi) {
  cfg.validate();
  const QSeries zero(cfg.D);
  SeriesSlice s(lo, hi, zero, false, true);
  const Rational sign = (d % 2 == 0) ? Rational(1) : Rational(-1);
  for (int p = lo; p <= hi; ++p) {
    const int j = d - 1 - p;
    if (j < 0) continue;
    s.set(p, QSeries::constant(sign * tau_moment(cfg, j + d) / factorial_rational(j), cfg.D));
  }
  return s;
}

QSeries nu_pair(const TauConfig& cfg, int d, const SeriesSlice& x) {
  const SeriesSlice nu = nu_slice(cfg, d, -1 - x.hi(), std::max(-1 - x.lo(), d - 1));
  return laurent_residue(laurent_mul(x, nu, -1, -1));
}

std::vector<Violation> violations(const QSeries& residual) {
  std::vector<Violation> v;
  for (const auto& [m, c] : residual.terms()) v.push_back({m.str(), to_string(c)});
  return v;
}

QSeries hirota_residual(const TauConfig& cfg, int d1, int d2) {
  cfg.validate();
  if (!(d1 > d2 && d2 >= 0)) throw PreconditionError("Hirota identity needs d1 > d2 >= 0");
  require_index(cfg, d1);
  require_index(cfg, d2 + 1);
  TauConfig clean = cfg;
  clean.corrupt_m4 = false;
  const int D = cfg.D;
  const QSeries zero(D);

  // Zhat_{d1}(tt - [1/z]): z-powers -d1..0.
  const QSeries za = rename_block(zhat_series(cfg, d1, D + d1), Block::T, Block::Tilde);
  const auto a = x_powers(shift(za, {Rational(1)}, -1, Block::Tilde), d1, D);
  SeriesSlice sa(-d1, 0, zero);
  for (int r = 0; r <= d1; ++r) sa.set(-r, a[static_cast<std::size_t>(r)]);

  // Zhat_{d2+1}(t + [1/z]): only z-powers down to -R can reach the residue.
  const int R = D + d1 - d2;
  const auto c = x_powers(shift(zhat_series(clean, d2 + 1, D + R), {Rational(1)}, +1), R, D);
  SeriesSlice sc(-R, 0, zero, false, true);
  for (int r = 0; r <= R; ++r) sc.set(-r, c[static_cast<std::size_t>(r)]);

  // exp(sum (tt_j - t_j) z^j) = sum_k h_k(tt - t) z^k, via k h_k = sum_i i v_i h_{k-i}.
  std::vector<QSeries> v(static_cast<std::size_t>(D) + 1, zero);
  for (int j = 1; j <= D; ++j)
    v[static_cast<std::size_t>(j)] = QSeries::variable(Var::tilde(j), D) - QSeries::variable(Var::t(j), D);
  std::vector<QSeries> h{QSeries::constant(Rational(1), D)};
  for (int k = 1; k <= D; ++k) {
    QSeries acc(D);
    for (int i = 1; i <= k; ++i) acc += v[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(k - i)] * Rational(i);
    h.push_back(acc * Rational(1, k));
  }
  const SeriesSlice sb = SeriesSlice::from_coeffs(0, h, zero);

  const SeriesSlice ab = laurent_mul(sa, sb, -d1, D);
  const int p = d2 - d1;
  return laurent_mul(ab, sc, p, p).at(p);
}

QSeries fay_residual(const TauConfig& cfg, int d, const Rational& a, const Rational& b) {
  cfg.validate();
  if (d < 1) throw PreconditionError("Fay identity needs d >= 1");
  require_index(cfg, d);
  TauConfig clean = cfg;
  clean.corrupt_m4 = false;
  const QSeries zd = zhat_series(cfg, d);
  const QSeries zm = zhat_series(clean, d - 1);
  return shift(zd, {a}) * shift(zm, {b}) * a - shift(zd, {b}) * shift(zm, {a}) * b -
         shift(zd, {a, b}) * zm * Rational(a - b);
}

QSeries fay_det_residual(const TauConfig& cfg, int d, const std::vector<Rational>& a) {
  cfg.validate();
  const int m = static_cast<int>(a.size());
  if (m < 1 || m > d) throw PreconditionError("determinant Fay identity needs d >= m >= 1");
  require_index(cfg, d);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      if (a[static_cast<std::size_t>(j)] == a[static_cast<std::size_t>(k)])
        throw PreconditionError("determinant Fay identity needs distinct points");
  const int D = cfg.D;
  std::vector<MiwaPoint<Rational>> all;
  Rational delta = 1;
  for (int j = 0; j < m; ++j) {
    all.push_back({a[static_cast<std::size_t>(j)], +1});
    for (int k = j + 1; k < m; ++k) delta *= a[static_cast<std::size_t>(j)] - a[static_cast<std::size_t>(k)];
  }
  TauConfig clean = cfg;
  clean.corrupt_m4 = false;
  auto component = [&](int k) { return zhat_series(k == d ? cfg : clean, k); };
  const QSeries zd = component(d);
  QSeries lhs = miwa_shift(zd, all) * delta;
  for (int j = 1; j <= m; ++j) lhs *= component(d + 1 - j);

  const auto n = static_cast<std::size_t>(m);
  const QSeries zero(D);
  DenseMatrix<QSeries> mat(n, n, zero);
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= m; ++k) {
      const Rational& ak = a[static_cast<std::size_t>(k - 1)];
      Rational scale = 1;
      for (int i = 0; i < m - j; ++i) scale *= ak;
      mat(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(k - 1)) = shift(component(d + 1 - j), {ak}) * scale;
    }
  return lhs - zd * det_expand(mat, zero, QSeries::constant(Rational(1), D));
}

void clear_tau_cache() {
  auto& c = tau_cache();
  std::lock_guard<std::mutex> lock(c.mu);
  c.zhat.clear();
  c.schur.clear();
  c.h_tables.clear();
}

}  // namespace rmxs

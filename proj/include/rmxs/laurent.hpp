#pragma once

// Finite windows of formal Laurent series in z.
//
// A slice stores the coefficients of z^lo..z^hi. Outside the window a
// coefficient is either known to vanish (the side is "exact") or unknown
// because the underlying series was cut there. Every operation checks from the
// window bounds that the coefficients it returns received all their
// contributions, and throws InsufficientWindow instead of truncating.

#include "rmxs/errors.hpp"
#include "rmxs/scalar.hpp"
#include "rmxs/series.hpp"

#include <climits>
#include <string>
#include <utility>
#include <vector>

namespace rmxs {

template <class F>
bool coeff_is_zero(const TruncatedSeries<F>& c) {
  return c.is_zero();
}
template <class F>
bool coeff_is_zero(const F& c) {
  return FieldTraits<F>::is_zero(c);
}

template <class C>
class LaurentSlice {
 public:
  /// Zero-filled window [lo, hi]; `zero` is the additive identity of C (a
  /// series needs its cap).
  LaurentSlice(int lo, int hi, C zero, bool exact_below = true, bool exact_above = true)
      : lo_(lo), hi_(hi), zero_(std::move(zero)), exact_below_(exact_below), exact_above_(exact_above) {
    if (hi < lo) throw PreconditionError("Laurent window needs hi >= lo");
    coeffs_.assign(static_cast<std::size_t>(hi - lo + 1), zero_);
  }

  static LaurentSlice from_coeffs(int lo, std::vector<C> coeffs, C zero, bool exact_below = true,
                                  bool exact_above = true) {
    if (coeffs.empty()) throw PreconditionError("Laurent window needs at least one coefficient");
    LaurentSlice s(lo, lo + static_cast<int>(coeffs.size()) - 1, std::move(zero), exact_below, exact_above);
    s.coeffs_ = std::move(coeffs);
    return s;
  }

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool exact_below() const { return exact_below_; }
  bool exact_above() const { return exact_above_; }
  const C& zero() const { return zero_; }

  bool in_window(int p) const { return p >= lo_ && p <= hi_; }

  /// Coefficient of z^p. Outside the window this is only defined on an
  /// exact side.
  const C& at(int p) const {
    if (in_window(p)) return coeffs_[static_cast<std::size_t>(p - lo_)];
    if ((p < lo_ && exact_below_) || (p > hi_ && exact_above_)) return zero_;
    throw InsufficientWindow("coefficient of z^" + std::to_string(p) + " lies outside the window [" +
                             std::to_string(lo_) + "," + std::to_string(hi_) + "]");
  }

  void set(int p, C value) {
    if (!in_window(p)) throw InsufficientWindow("set outside window at z^" + std::to_string(p));
    coeffs_[static_cast<std::size_t>(p - lo_)] = std::move(value);
  }

  /// True if some coefficient with power in [from, to] may be nonzero.
  bool possibly_nonzero(long from, long to) const {
    if (from > to) return false;
    if (from < lo_ && !exact_below_) return true;
    if (to > hi_ && !exact_above_) return true;
    for (long p = std::max<long>(from, lo_); p <= std::min<long>(to, hi_); ++p)
      if (!coeff_is_zero(coeffs_[static_cast<std::size_t>(p - lo_)])) return true;
    return false;
  }

  /// Multiplies by z^k.
  LaurentSlice shifted(int k) const {
    LaurentSlice r = *this;
    r.lo_ += k;
    r.hi_ += k;
    return r;
  }

 private:
  int lo_;
  int hi_;
  C zero_;
  bool exact_below_;
  bool exact_above_;
  std::vector<C> coeffs_;
};

namespace detail {

template <class C>
void require_covered(const LaurentSlice<C>& unknown_side, const LaurentSlice<C>& other, int p, const char* name) {
  constexpr long kInf = LONG_MAX / 4;
  // Unknown powers i > hi of `unknown_side` pair with powers p - i < p - hi.
  if (!unknown_side.exact_above() && other.possibly_nonzero(-kInf, static_cast<long>(p) - unknown_side.hi() - 1))
    throw InsufficientWindow("kept power " + std::to_string(p) + " needs " + name + "-power " +
                             std::to_string(unknown_side.hi() + 1) + " outside its window");
  if (!unknown_side.exact_below() && other.possibly_nonzero(static_cast<long>(p) - unknown_side.lo() + 1, kInf))
    throw InsufficientWindow("kept power " + std::to_string(p) + " needs " + name + "-power " +
                             std::to_string(unknown_side.lo() - 1) + " outside its window");
}

}  // namespace detail

/// Convolution of two slices restricted to powers [keep_lo, keep_hi].
template <class C>
LaurentSlice<C> laurent_mul(const LaurentSlice<C>& a, const LaurentSlice<C>& b, int keep_lo, int keep_hi) {
  LaurentSlice<C> r(keep_lo, keep_hi, a.zero() * b.zero(),
                    a.exact_below() && b.exact_below() && keep_lo <= a.lo() + b.lo(),
                    a.exact_above() && b.exact_above() && keep_hi >= a.hi() + b.hi());
  for (int p = keep_lo; p <= keep_hi; ++p) {
    detail::require_covered(a, b, p, "A");
    detail::require_covered(b, a, p, "B");
    C acc = r.zero();
    const int i_lo = std::max(a.lo(), p - b.hi());
    const int i_hi = std::min(a.hi(), p - b.lo());
    for (int i = i_lo; i <= i_hi; ++i) {
      const C& x = a.at(i);
      const C& y = b.at(p - i);
      if (coeff_is_zero(x) || coeff_is_zero(y)) continue;
      acc += x * y;
    }
    r.set(p, std::move(acc));
  }
  return r;
}

/// Formal residue: the coefficient of z^{-1}.
template <class C>
C laurent_residue(const LaurentSlice<C>& s) {
  if (s.lo() > -1 || s.hi() < -1)
    throw InsufficientWindow("window [" + std::to_string(s.lo()) + "," + std::to_string(s.hi()) +
                             "] excludes z^-1");
  return s.at(-1);
}

}  // namespace rmxs

#pragma once

// Coefficient fields used throughout the library.
//
// Rational is arbitrary-precision exact (GMP); Real is IEEE binary128. Both
// are used with expression templates disabled so that generic code sees
// plain value types.

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <string>
#include <string_view>

namespace rmxs {

namespace mp = boost::multiprecision;

using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Real = mp::number<mp::float128_backend, mp::et_off>;

/// Parses "p/q", an integer, or a finite decimal ("0.125", "-3e-2") exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Real& x, int digits = 36);

double to_double(const Rational& q);
Real to_real(const Rational& q);

/// Exact rational value of a finite double.
Rational exact_rational(double x);

Real factorial_real(int n);
Rational factorial_rational(int n);

/// Explicit comparison tolerance for floating values; never compare floats
/// with ==.
struct Tolerance {
  double abs = 0.0;
  double rel = 0.0;

  template <class T>
  bool close(const T& a, const T& b) const {
    using std::abs;
    using std::max;
    const T diff = abs(a - b);
    const T scale = max(abs(a), abs(b));
    return diff <= T(this->abs) || diff <= T(rel) * scale;
  }
};

/// Field-specific helpers used by the generic series and matrix code.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x) { return x == 0; }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
  static Rational from_rational(const Rational& q) { return q; }
  static const char* name() { return "rational"; }
};

template <>
struct FieldTraits<double> {
  static constexpr bool exact = false;
  // Canonical-form elision only drops exact zeros; approximate comparison
  // goes through Tolerance.
  static bool is_zero(double x) { return x == 0.0; }
  static double abs(double x) { return std::fabs(x); }
  static double from_rational(const Rational& q) { return to_double(q); }
  static const char* name() { return "float"; }
};

template <>
struct FieldTraits<Real> {
  static constexpr bool exact = false;
  static bool is_zero(const Real& x) { return x == 0; }
  static Real abs(const Real& x) { return x < 0 ? Real(-x) : x; }
  static Real from_rational(const Rational& q) { return to_real(q); }
  static const char* name() { return "float128"; }
};

}  // namespace rmxs

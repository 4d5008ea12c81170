#include "rmxs/scalar.hpp"

#include "rmxs/errors.hpp"

#include <cctype>
#include <cstdint>
#include <sstream>

namespace rmxs {

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw PreconditionError("malformed number '" + std::string(whole) + "'");
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw PreconditionError("malformed number '" + std::string(whole) + "'");
  // Leading zeros would select octal in the string constructor.
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer(std::string(digits));
}

Integer pow10(long k) {
  Integer r = 1;
  for (long i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw PreconditionError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw PreconditionError("zero denominator in '" + std::string(whole) + "'");
    return num / den;
  }

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    Integer ev = parse_integer(exp_part, whole);
    if (ev > 4000) throw PreconditionError("exponent out of range in '" + std::string(whole) + "'");
    exponent = ev.convert_to<long>();
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    frac_digits = static_cast<long>(text.size() - dot - 1);
  } else {
    digits = std::string(text);
  }
  Rational value(parse_integer(digits, whole));
  exponent -= frac_digits;
  if (exponent > 0) value *= Rational(pow10(exponent));
  if (exponent < 0) value /= Rational(pow10(-exponent));
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  return q.str();
}

std::string to_string(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

double to_double(const Rational& q) {
  return q.convert_to<double>();
}

Real to_real(const Rational& q) {
  // Divide in binary128 so the result is correctly rounded to ~34 digits.
  const Integer num = mp::numerator(q);
  const Integer den = mp::denominator(q);
  return Real(num.str()) / Real(den.str());
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw PreconditionError("non-finite value has no rational form");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // 53-bit mantissa scaled to an integer.
  const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r{Integer(m)};
  exp -= 53;
  Integer two_pow = 1;
  for (int i = 0; i < std::abs(exp); ++i) two_pow *= 2;
  if (exp >= 0) return r * Rational(two_pow);
  return r / Rational(two_pow);
}

Real factorial_real(int n) {
  Real r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

Rational factorial_rational(int n) {
  Integer r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return Rational(r);
}

}  // namespace rmxs

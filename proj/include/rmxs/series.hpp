#pragma once

// Truncated multivariate formal power series in Miwa-type variables.
//
// A variable is t_j of some block (the base variables t, a second
// independent block t~ used by the bilinear identity, and an auxiliary
// grading block x). Its weight is j. A monomial's weight is the weighted
// degree sum_j j*e_j, and a series with cap D stores exactly the monomials of
// weight <= D. This truncation is a ring homomorphism (the weight > D
// monomials form an ideal), so every ring identity that holds for full series
// holds coefficientwise for truncated ones.

#include "rmxs/errors.hpp"
#include "rmxs/scalar.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rmxs {

enum class Block : std::uint8_t { T = 0, Tilde = 1, Aux = 2 };

struct Var {
  Block block = Block::T;
  int index = 1;  // j >= 1, also the weight

  static Var t(int j) { return {Block::T, j}; }
  static Var tilde(int j) { return {Block::Tilde, j}; }
  static Var aux() { return {Block::Aux, 1}; }
};

class Monomial {
 public:
  using Factor = std::pair<std::uint16_t, std::uint16_t>;  // (key, exponent)

  Monomial() = default;
  static Monomial of(Var v, int exponent = 1);

  int weight() const { return weight_; }
  int weight_in(Block b) const;
  int exponent(Var v) const;
  bool involves(Block b) const;
  const std::vector<Factor>& factors() const { return factors_; }

  /// The monomial with every factor of block b removed.
  Monomial without(Block b) const;

  /// Sign change under t_j -> -t_j for all variables of block b.
  int parity_sign(Block b) const;

  std::string str() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.factors_ <=> b.factors_; }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }

  static std::uint16_t key(Var v) {
    return static_cast<std::uint16_t>((static_cast<unsigned>(v.block) << 8) | static_cast<unsigned>(v.index));
  }
  static Var var(std::uint16_t key) {
    return {static_cast<Block>(key >> 8), static_cast<int>(key & 0xff)};
  }

 private:
  std::vector<Factor> factors_;
  int weight_ = 0;
};

template <class F>
class TruncatedSeries {
 public:
  using Terms = std::map<Monomial, F>;
  using Field = F;

  explicit TruncatedSeries(int cap = 0) : cap_(cap) {
    if (cap < 0) throw PreconditionError("series cap must be non-negative");
  }

  static TruncatedSeries constant(const F& c, int cap) {
    TruncatedSeries s(cap);
    s.add_term(Monomial{}, c);
    return s;
  }
  static TruncatedSeries variable(Var v, int cap) { return monomial(Monomial::of(v), F(1), cap); }
  static TruncatedSeries monomial(const Monomial& m, const F& c, int cap) {
    TruncatedSeries s(cap);
    s.add_term(m, c);
    return s;
  }

  int cap() const { return cap_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  F coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? F(0) : it->second;
  }
  F constant_term() const { return coefficient(Monomial{}); }

  /// Adds c*m; monomials above the cap are dropped, zero sums are elided.
  void add_term(const Monomial& m, const F& c) {
    if (m.weight() > cap_ || FieldTraits<F>::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (FieldTraits<F>::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Same series with a smaller cap. Raising the cap would invent data.
  TruncatedSeries with_cap(int cap) const {
    if (cap > cap_) throw PreconditionError("cannot raise the cap of a truncated series");
    TruncatedSeries r(cap);
    for (const auto& [m, c] : terms_)
      if (m.weight() <= cap) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    if (o.cap_ < cap_) *this = with_cap(o.cap_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    if (o.cap_ < cap_) *this = with_cap(o.cap_);
    for (const auto& [m, c] : o.terms_) add_term(m, F(-c));
    return *this;
  }
  TruncatedSeries& operator*=(const F& k) {
    if (FieldTraits<F>::is_zero(k)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= k;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator-(TruncatedSeries a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend TruncatedSeries operator*(TruncatedSeries a, const F& k) { return a *= k; }
  friend TruncatedSeries operator*(const F& k, TruncatedSeries a) { return a *= k; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int cap = std::min(a.cap_, b.cap_);
    TruncatedSeries r(cap);
    if (a.is_zero() || b.is_zero()) return r;
    // Bucket the right operand by weight so the inner loop stops early.
    std::vector<std::vector<const typename Terms::value_type*>> by_weight(cap + 1);
    for (const auto& entry : b.terms_)
      if (entry.first.weight() <= cap) by_weight[entry.first.weight()].push_back(&entry);
    for (const auto& [ma, ca] : a.terms_) {
      const int room = cap - ma.weight();
      for (int w = 0; w <= room; ++w)
        for (const auto* entry : by_weight[w]) r.add_term(ma * entry->first, F(ca * entry->second));
    }
    return r;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  /// Structural equality: same cap and identical canonical term maps.
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.cap_ == b.cap_ && a.terms_ == b.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + coeff_string(c) + ")";
      if (m.weight() > 0 || !m.factors().empty()) out += "*" + m.str();
    }
    return out;
  }

 private:
  static std::string coeff_string(const F& c) {
    if constexpr (std::is_same_v<F, Rational>)
      return to_string(c);
    else if constexpr (std::is_same_v<F, Real>)
      return to_string(c, 20);
    else
      return std::to_string(c);
  }

  int cap_;
  Terms terms_;
};

/// exp(f) for f with zero constant term, truncated at f's cap.
template <class F>
TruncatedSeries<F> series_exp(const TruncatedSeries<F>& f) {
  if (!FieldTraits<F>::is_zero(f.constant_term()))
    throw PreconditionError("series_exp requires a zero constant term");
  TruncatedSeries<F> result = TruncatedSeries<F>::constant(F(1), f.cap());
  TruncatedSeries<F> power = result;
  for (int k = 1; k <= f.cap(); ++k) {
    power = power * f;
    power *= F(1) / F(k);
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

/// One summand of a Miwa point sign*[c]: t_j -> sign*c^j/j.
template <class F>
struct MiwaPoint {
  F c;
  int sign = +1;
};

/// Substitutes t_j = sum_i sign_i*c_i^j/j into a series in the T block.
template <class F>
F miwa_eval(const TruncatedSeries<F>& f, const std::vector<MiwaPoint<F>>& points) {
  const int cap = f.cap();
  std::vector<F> t(cap + 1, F(0));
  for (const auto& p : points) {
    if (p.sign != 1 && p.sign != -1) throw PreconditionError("Miwa sign must be +1 or -1");
    F power(1);
    for (int j = 1; j <= cap; ++j) {
      power *= p.c;
      t[j] += F(p.sign) * power / F(j);
    }
  }
  F total(0);
  for (const auto& [m, c] : f.terms()) {
    F term = c;
    for (const auto& [key, e] : m.factors()) {
      const Var v = Monomial::var(key);
      if (v.block != Block::T) throw PreconditionError("miwa_eval: series has variables outside the t block");
      for (int k = 0; k < e; ++k) term *= t[v.index];
    }
    total += term;
  }
  return total;
}

/// f(t + sum_i sign_i [c_i x]) where x is the auxiliary grading variable:
/// each t_j of block b becomes t_j + g_j x^j with g_j = sum_i sign_i c_i^j / j.
/// The substitution preserves weight, so the result is exact at f's cap in the
/// joint (t, x) grading even though f itself is truncated.
template <class F>
TruncatedSeries<F> miwa_shift(const TruncatedSeries<F>& f, const std::vector<MiwaPoint<F>>& points,
                              Block b = Block::T) {
  const int cap = f.cap();
  std::vector<F> g(static_cast<std::size_t>(cap) + 1, F(0));
  for (const auto& p : points) {
    if (p.sign != 1 && p.sign != -1) throw PreconditionError("Miwa sign must be +1 or -1");
    F power(1);
    for (int j = 1; j <= cap; ++j) {
      power *= p.c;
      g[static_cast<std::size_t>(j)] += F(p.sign) * power / F(j);
    }
  }
  const Var x = Var::aux();
  TruncatedSeries<F> r(cap);
  using Term = std::pair<Monomial, F>;
  for (const auto& [m, c] : f.terms()) {
    std::vector<Term> acc{{m.without(b), c}};
    for (const auto& [key, e] : m.factors()) {
      const Var v = Monomial::var(key);
      if (v.block != b) continue;
      // (t_j + g_j x^j)^e = sum_k binom(e,k) g_j^k t_j^(e-k) x^(jk)
      std::vector<Term> next;
      F gk(1);
      F binom(1);
      for (int k = 0; k <= e; ++k) {
        if (k > 0) {
          gk *= g[static_cast<std::size_t>(v.index)];
          binom = binom * F(e - k + 1) / F(k);
        }
        if (FieldTraits<F>::is_zero(gk)) break;
        const Monomial piece = Monomial::of(v, e - k) * Monomial::of(x, v.index * k);
        for (const auto& [am, ac] : acc) {
          Monomial prod = am * piece;
          if (prod.weight() <= cap) next.emplace_back(std::move(prod), F(ac * binom * gk));
        }
      }
      acc = std::move(next);
    }
    for (const auto& [am, ac] : acc) r.add_term(am, ac);
  }
  return r;
}

/// Coefficient of v^power, as a series in the remaining variables. The
/// result's cap is reduced by the weight removed.
template <class F>
TruncatedSeries<F> extract_power(const TruncatedSeries<F>& f, Var v, int power) {
  const int removed = power * v.index;
  if (removed > f.cap()) return TruncatedSeries<F>(0);
  TruncatedSeries<F> r(f.cap() - removed);
  const auto key = Monomial::key(v);
  for (const auto& [m, c] : f.terms()) {
    if (m.exponent(v) != power) continue;
    Monomial rest;
    for (const auto& [k, e] : m.factors())
      if (k != key) rest = rest * Monomial::of(Monomial::var(k), e);
    r.add_term(rest, c);
  }
  return r;
}

/// f(t) -> f(-t) for the variables of one block.
template <class F>
TruncatedSeries<F> negate_block(const TruncatedSeries<F>& f, Block b) {
  TruncatedSeries<F> r(f.cap());
  for (const auto& [m, c] : f.terms()) r.add_term(m, m.parity_sign(b) < 0 ? F(-c) : c);
  return r;
}

/// Moves every variable of block `from` to block `to`.
template <class F>
TruncatedSeries<F> rename_block(const TruncatedSeries<F>& f, Block from, Block to) {
  TruncatedSeries<F> r(f.cap());
  for (const auto& [m, c] : f.terms()) {
    Monomial moved;
    for (const auto& [k, e] : m.factors()) {
      Var v = Monomial::var(k);
      if (v.block == from) v.block = to;
      moved = moved * Monomial::of(v, e);
    }
    r.add_term(moved, c);
  }
  return r;
}

/// Keeps only monomials whose weight restricted to block b is <= w.
template <class F>
TruncatedSeries<F> restrict_block_weight(const TruncatedSeries<F>& f, Block b, int w) {
  TruncatedSeries<F> r(f.cap());
  for (const auto& [m, c] : f.terms())
    if (m.weight_in(b) <= w) r.add_term(m, c);
  return r;
}

template <class To, class From>
TruncatedSeries<To> convert_series(const TruncatedSeries<From>& f) {
  TruncatedSeries<To> r(f.cap());
  for (const auto& [m, c] : f.terms()) {
    if constexpr (std::is_same_v<From, Rational>)
      r.add_term(m, FieldTraits<To>::from_rational(c));
    else
      r.add_term(m, To(c));
  }
  return r;
}

}  // namespace rmxs

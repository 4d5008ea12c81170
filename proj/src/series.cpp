#include "rmxs/series.hpp"

namespace rmxs {

Monomial Monomial::of(Var v, int exponent) {
  if (v.index < 1 || v.index > 255) throw PreconditionError("variable index out of range");
  if (exponent < 0) throw PreconditionError("negative exponent");
  Monomial m;
  if (exponent == 0) return m;
  m.factors_.emplace_back(key(v), static_cast<std::uint16_t>(exponent));
  m.weight_ = v.index * exponent;
  return m;
}

int Monomial::weight_in(Block b) const {
  int w = 0;
  for (const auto& [k, e] : factors_) {
    const Var v = var(k);
    if (v.block == b) w += v.index * e;
  }
  return w;
}

int Monomial::exponent(Var v) const {
  const auto k = key(v);
  for (const auto& [key_, e] : factors_)
    if (key_ == k) return e;
  return 0;
}

bool Monomial::involves(Block b) const {
  return std::any_of(factors_.begin(), factors_.end(), [b](const Factor& f) { return var(f.first).block == b; });
}

Monomial Monomial::without(Block b) const {
  Monomial m;
  for (const auto& f : factors_) {
    const Var v = var(f.first);
    if (v.block == b) continue;
    m.factors_.push_back(f);
    m.weight_ += v.index * f.second;
  }
  return m;
}

int Monomial::parity_sign(Block b) const {
  int degree = 0;
  for (const auto& [k, e] : factors_)
    if (var(k).block == b) degree += e;
  return degree % 2 == 0 ? 1 : -1;
}

std::string Monomial::str() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [k, e] : factors_) {
    const Var v = var(k);
    if (!out.empty()) out += "*";
    switch (v.block) {
      case Block::T: out += "t" + std::to_string(v.index); break;
      case Block::Tilde: out += "tt" + std::to_string(v.index); break;
      case Block::Aux: out += v.index == 1 ? std::string("x") : "x" + std::to_string(v.index); break;
    }
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
      r.factors_.push_back(*i++);
    } else if (i == a.factors_.end() || j->first < i->first) {
      r.factors_.push_back(*j++);
    } else {
      r.factors_.emplace_back(i->first, static_cast<std::uint16_t>(i->second + j->second));
      ++i;
      ++j;
    }
  }
  r.weight_ = a.weight_ + b.weight_;
  return r;
}

}  // namespace rmxs

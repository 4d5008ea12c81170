#include "rmxs/schur.hpp"

#include <boost/multiprecision/float128.hpp>

namespace rmxs {

namespace {

std::vector<Real> to_reals(const std::vector<double>& x) {
  return std::vector<Real>(x.begin(), x.end());
}

Real block_sum(const std::vector<Real>& a, const std::vector<Real>& lambda, int weight) {
  const int d = static_cast<int>(a.size());
  Real sum = 0;
  for (const Partition& kappa : partitions_of(weight, d)) {
    Real denom = 1;
    for (int q = 1; q <= d; ++q) denom *= factorial_real(kappa.part(q) + d - q);
    sum += schur_poly(kappa, lambda) * schur_poly(kappa, a) / denom;
  }
  return sum;
}

}  // namespace

double hciz_expansion_block(const std::vector<double>& a, const std::vector<double>& lambda, int weight) {
  const Real b = block_sum(to_reals(a), to_reals(lambda), weight);
  return static_cast<double>(b < 0 ? Real(-b) : b);
}

double hciz_expansion_residual(const std::vector<double>& a, const std::vector<double>& lambda, int max_weight) {
  if (a.size() != lambda.size() || a.empty())
    throw PreconditionError("hciz_expansion_residual needs two non-empty lists of equal length");
  if (max_weight < 0) throw PreconditionError("max_weight must be non-negative");
  const auto ar = to_reals(a);
  const auto lr = to_reals(lambda);
  require_distinct(ar, "hciz_expansion_residual(a)");
  require_distinct(lr, "hciz_expansion_residual(lambda)");
  const std::size_t d = a.size();
  DenseMatrix<Real> m(d, d, Real(0));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) m(j, k) = exp(ar[j] * lr[k]);
  const Real lhs = det_pivoted(m).value / (vandermonde(ar) * vandermonde(lr));
  Real rhs = 0;
  for (int w = 0; w <= max_weight; ++w) rhs += block_sum(ar, lr, w);
  const Real r = lhs - rhs;
  return static_cast<double>(r < 0 ? Real(-r) : r);
}

}  // namespace rmxs

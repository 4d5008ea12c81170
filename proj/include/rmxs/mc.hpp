#pragma once

// Monte Carlo oracle for gap expectations of the Gaussian model with an
// external source: M = A + H with H drawn from the Gaussian unitary ensemble
// with density proportional to exp(-Tr H^2 / 2).

#include "rmxs/intervals.hpp"
#include "rmxs/matrix_model.hpp"
#include "rmxs/scalar.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rmxs {

struct McEstimate {
  double mean = 0.0;
  /// Sample standard deviation / sqrt(N).
  double stderr_ = 0.0;
  long N = 0;
  std::uint64_t seed = 0;
};

/// A 64-bit stream seed derived from a run seed and a text key.
std::uint64_t derive_stream(std::uint64_t seed, const std::string& key);

/// Eigenvalues (ascending) of diag(a, 0, ..., 0) + H, d x d.
std::vector<double> sample_spiked_eigenvalues(int d, const std::vector<double>& a, std::mt19937_64& rng);
std::vector<double> sample_spiked_eigenvalues(int d, const std::vector<double>& a, std::uint64_t seed);

struct McTarget {
  IntervalSet region;
  Rational s = 0;
};

struct McOptions {
  long N = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Sample means of prod_j (1 - s chi_E(lambda_j)) for every target, from one
/// shared set of N samples. Samples are drawn in fixed chunks, each from its
/// own stream derived from (seed, model, chunk index), and reduced in chunk
/// order, so the result does not depend on the worker count.
std::vector<McEstimate> estimate_expectations(const SourceModel& model, const std::vector<McTarget>& targets,
                                              const McOptions& opts);

McEstimate estimate_expectation(const SourceModel& model, const IntervalSet& region, const Rational& s,
                                 const McOptions& opts);

struct CrossCheck {
  McEstimate mc;
  double quadrature = 0.0;
  /// |mc - quadrature| / stderr; 0 when both agree exactly with zero stderr,
  /// infinite when they disagree with zero stderr.
  double z = 0.0;
  bool pass = false;
};

CrossCheck compare(const McEstimate& mc, double quadrature, double threshold = 3.0);

/// estimate_expectation against matrix_model's expectation.
CrossCheck cross_check(const ExpectationQuery& q, const McOptions& opts, const ModelOptions& model_opts = {},
                       double threshold = 3.0);

}  // namespace rmxs

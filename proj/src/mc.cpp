#include "rmxs/mc.hpp"

#include "rmxs/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace rmxs {

namespace {

constexpr long kChunk = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> source_values(const SourceModel& model) {
  std::vector<double> a;
  for (const auto& s : model.sources)
    for (int k = 0; k < s.multiplicity; ++k) a.push_back(to_double(s.a));
  return a;
}

struct ChunkSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

}  // namespace

std::uint64_t derive_stream(std::uint64_t seed, const std::string& key) { return splitmix64(seed ^ fnv1a(key)); }

std::vector<double> sample_spiked_eigenvalues(int d, const std::vector<double>& a, std::mt19937_64& rng) {
  if (d < 1) throw PreconditionError("sample dimension must be >= 1");
  if (static_cast<int>(a.size()) > d) throw PreconditionError("more sources than the dimension");
  std::normal_distribution<double> diag(0.0, 1.0);
  std::normal_distribution<double> off(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = diag(rng) + (i < static_cast<int>(a.size()) ? a[static_cast<std::size_t>(i)] : 0.0);
    for (int j = i + 1; j < d; ++j) {
      const double re = off(rng);
      const double im = off(rng);
      m(i, j) = {re, im};
      m(j, i) = {re, -im};
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + d);
}

std::vector<double> sample_spiked_eigenvalues(int d, const std::vector<double>& a, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  return sample_spiked_eigenvalues(d, a, rng);
}

std::vector<McEstimate> estimate_expectations(const SourceModel& model, const std::vector<McTarget>& targets,
                                              const McOptions& opts) {
  if (model.weight.kind() != WeightKind::Gaussian)
    throw PreconditionError("the Monte Carlo oracle samples the Gaussian weight only");
  model.validate();
  if (opts.N < 1000) throw PreconditionError("Monte Carlo needs N >= 1000");
  const auto a = source_values(model);
  const std::uint64_t stream = derive_stream(opts.seed, model.str());
  const long chunks = (opts.N + kChunk - 1) / kChunk;
  const std::size_t nt = targets.size();
  std::vector<double> s(nt);
  for (std::size_t t = 0; t < nt; ++t) s[t] = to_double(targets[t].s);

  std::vector<ChunkSums> results(static_cast<std::size_t>(chunks));
  auto run_chunk = [&](long c) {
    std::mt19937_64 rng(splitmix64(stream + static_cast<std::uint64_t>(c)));
    ChunkSums r{std::vector<double>(nt, 0.0), std::vector<double>(nt, 0.0)};
    const long n = std::min(kChunk, opts.N - c * kChunk);
    for (long i = 0; i < n; ++i) {
      const auto ev = sample_spiked_eigenvalues(model.d, a, rng);
      for (std::size_t t = 0; t < nt; ++t) {
        double v = 1.0;
        for (double x : ev)
          if (targets[t].region.contains(x)) v *= 1.0 - s[t];
        r.sum[t] += v;
        r.sum_sq[t] += v * v;
      }
    }
    results[static_cast<std::size_t>(c)] = std::move(r);
  };
  const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(chunks)));
  if (workers == 1) {
    for (long c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (long c = w; c < chunks; c += workers) run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<McEstimate> out;
  for (std::size_t t = 0; t < nt; ++t) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& r : results) {
      sum += r.sum[t];
      sum_sq += r.sum_sq[t];
    }
    const double n = static_cast<double>(opts.N);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
    out.push_back({mean, std::sqrt(var / n), opts.N, opts.seed});
  }
  return out;
}

McEstimate estimate_expectation(const SourceModel& model, const IntervalSet& region, const Rational& s,
                                const McOptions& opts) {
  return estimate_expectations(model, {{region, s}}, opts).front();
}

CrossCheck compare(const McEstimate& mc, double quadrature, double threshold) {
  CrossCheck c;
  c.mc = mc;
  c.quadrature = quadrature;
  const double diff = std::fabs(mc.mean - quadrature);
  if (mc.stderr_ > 0)
    c.z = diff / mc.stderr_;
  else
    c.z = diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  c.pass = c.z <= threshold;
  return c;
}

CrossCheck cross_check(const ExpectationQuery& q, const McOptions& opts, const ModelOptions& model_opts,
                       double threshold) {
  const McEstimate mc = estimate_expectation(q.model, q.region, q.s, opts);
  return compare(mc, static_cast<double>(expectation(q, model_opts).value), threshold);
}

}  // namespace rmxs

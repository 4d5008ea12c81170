#pragma once

// Expands a RunConfig into independent checks, runs them on a worker pool and
// writes the reports. Output order is the plan order, whatever the worker
// count; timings go to a separate file so the results file is reproducible
// byte for byte.

#include "rmxs/harness/config.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rmxs::harness {

using Json = nlohmann::json;

/// Record statuses. "error" counts as a failure; "skipped" marks a grid point
/// outside a module precondition (recorded, never run).
inline constexpr const char* kPass = "pass";
inline constexpr const char* kFail = "fail";
inline constexpr const char* kInconclusive = "inconclusive";
inline constexpr const char* kSkipped = "skipped";
inline constexpr const char* kError = "error";

struct Record {
  /// Keys: id, suite, status, exploratory, inputs, values, tolerance, message.
  Json data;
  double seconds = 0.0;

  const std::string& id() const;
  std::string suite() const;
  std::string status() const;
  bool exploratory() const;
  /// True when this record makes the run fail.
  bool counts_as_failure() const;
};

struct RunOptions {
  /// Empty: nothing is written.
  std::string out_dir;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  bool mutate = false;
  /// Only checks whose id contains this substring.
  std::string filter;
};

/// One planned check (or, for Monte Carlo, one shared sample set feeding
/// several records).
struct Job {
  std::string suite;
  std::vector<std::string> ids;
  std::function<std::vector<Record>()> run;
};

std::vector<Job> plan(const RunConfig& cfg, const RunOptions& opts);

struct SuiteStats {
  int total = 0;
  int pass = 0;
  int fail = 0;
  int inconclusive = 0;
  int skipped = 0;
  int error = 0;
  int exploratory = 0;
  double worst = 0.0;
  double seconds = 0.0;
};

struct RunResult {
  std::vector<Record> records;
  std::map<std::string, SuiteStats> stats;
  int exit_code = 0;
};

RunResult run(const RunConfig& cfg, const RunOptions& opts);

/// Serialized forms, as written to the report files.
std::string results_ndjson(const std::vector<Record>& records);
std::string results_csv(const std::vector<Record>& records);
std::string summary_text(const RunConfig& cfg, const RunResult& result);

/// Decimal text for rationals with a terminating expansion, p/q otherwise.
std::string format_rational(const Rational& q);

}  // namespace rmxs::harness

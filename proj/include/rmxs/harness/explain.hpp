#pragma once

// Human-readable account of a single check: what it compares, its inputs, the
// two sides and how the verdict was reached.

#include "rmxs/harness/runner.hpp"

#include <string>
#include <vector>

namespace rmxs::harness {

struct SuiteDescription {
  std::string name;
  std::string title;
  std::string statement;
  std::string verdict;
};

const SuiteDescription& describe_suite(const std::string& suite);

std::string explain_record(const Record& r);

/// The known id closest to `id` in edit distance (empty when there are none).
std::string nearest_id(const std::string& id, const std::vector<std::string>& known);

/// Records of a results.ndjson file.
std::vector<Record> read_results(const std::string& path);

/// Runs the one check named by `id` and explains it. Throws ConfigError for
/// an unknown id, naming the nearest known id.
std::string explain(const RunConfig& cfg, const std::string& id, const RunOptions& opts);

}  // namespace rmxs::harness

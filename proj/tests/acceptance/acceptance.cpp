// Runs the bundled full configuration suite by suite and prints one line per
// acceptance criterion. Exit status 0 iff every criterion holds.

#include "rmxs/harness/config.hpp"
#include "rmxs/harness/runner.hpp"
#include "rmxs/matrix_model.hpp"
#include "rmxs/tau.hpp"
#include "rmxs/weights.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>

using namespace rmxs;
using namespace rmxs::harness;

namespace {

struct SuiteRun {
  RunResult result;
  double seconds = 0;
};

SuiteRun run_suite(const RunConfig& full, const std::string& suite, const RunOptions& opts) {
  RunConfig cfg = full;
  cfg.suites = {suite};
  const auto start = std::chrono::steady_clock::now();
  SuiteRun r{run(cfg, opts), 0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string counts(const SuiteStats& s) {
  std::ostringstream o;
  o << s.total << " records: " << s.pass << " pass, " << s.fail << " fail, " << s.inconclusive << " inconclusive, "
    << s.skipped << " skipped, " << s.error << " error";
  if (s.exploratory) o << ", " << s.exploratory << " exploratory";
  return o.str();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool clean(const SuiteStats& s) { return s.fail == 0 && s.error == 0 && s.pass > 0; }

SuiteStats stats(const SuiteRun& r, const std::string& suite) {
  auto it = r.result.stats.find(suite);
  return it == r.result.stats.end() ? SuiteStats{} : it->second;
}

}  // namespace

int main() {
  const char* env = std::getenv("RMXS_OUT_DIR");
  const std::filesystem::path out = env && *env ? env : "acceptance-out";
  const RunConfig full = preset("full");

  RunOptions single;
  std::map<std::string, SuiteRun> runs;
  std::string ndjson;
  for (const auto& suite : full.suites) {
    RunOptions o = single;
    o.out_dir = (out / suite).string();
    runs[suite] = run_suite(full, suite, o);
    ndjson += results_ndjson(runs[suite].result.records);
  }

  {
    const SuiteStats s = stats(runs["identity"], "identity");
    const int counted = s.pass + s.fail + s.inconclusive;
    const double inconclusive = counted ? static_cast<double>(s.inconclusive) / counted : 1.0;
    const double t = runs["identity"].seconds;
    const bool ok = clean(s) && inconclusive <= 0.05 && t < 300;
    report(1, ok, "main identity sweep",
           counts(s) + "; worst rel_err " + fmt("%.3g", s.worst) + ", inconclusive " + fmt("%.1f%%", 100 * inconclusive) +
               ", " + fmt("%.1f", t) + " s single-threaded");
  }
  {
    const SuiteStats s = stats(runs["z-ratio"], "z-ratio");
    report(2, clean(s), "z-ratio determinant identity", counts(s) + "; worst rel_err " + fmt("%.3g", s.worst));
  }
  {
    const SuiteStats s = stats(runs["vertex-ladder"], "vertex-ladder");
    const double t = runs["vertex-ladder"].seconds;
    report(3, clean(s) && t < 120, "vertex-operator ladder, exact",
           counts(s) + "; D=" + std::to_string(full.ladder->D) + ", " + fmt("%.2f", t) + " s");
  }
  {
    const SuiteStats s = stats(runs["hirota"], "hirota");
    RunOptions mutated;
    mutated.mutate = true;
    const SuiteStats m = stats(run_suite(full, "hirota", mutated), "hirota");
    const bool ok = clean(s) && m.total == s.total && m.fail == m.total;
    report(4, ok, "Hirota bilinear identity, exact",
           counts(s) + "; with M_4 perturbed " + std::to_string(m.fail) + "/" + std::to_string(m.total) +
               " records report violations");
  }
  {
    const SuiteStats f = stats(runs["fay"], "fay");
    const SuiteStats g = stats(runs["fay-det"], "fay-det");
    report(5, clean(f) && clean(g), "Fay identity and determinant form, exact",
           "fay " + counts(f) + "; fay-det " + counts(g));
  }
  {
    RunOptions threaded;
    threaded.workers = 4;
    RunConfig cfg = full;
    cfg.suites = {"mc"};
    const auto start = std::chrono::steady_clock::now();
    const RunResult r = run(cfg, threaded);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const SuiteStats s = r.stats.at("mc");
    report(6, clean(s) && t < 120 && results_ndjson(r.records) == results_ndjson(runs["mc"].result.records),
           "Monte Carlo cross-check",
           counts(s) + "; max |z| " + fmt("%.3f", s.worst) + ", N=" + std::to_string(full.mc->N) + ", " +
               fmt("%.1f", t) + " s with 4 workers");
  }
  {
    const SuiteStats s = stats(runs["structural"], "structural");
    report(7, clean(s), "structural suites", counts(s) + "; worst metric " + fmt("%.3g", s.worst));
  }
  {
    clear_caches();
    clear_tau_cache();
    RunOptions again;
    again.workers = 3;
    again.out_dir = (out / "rerun").string();
    const RunResult r = run(full, again);
    const std::string second = results_ndjson(r.records);
    report(8, second == ndjson, "reproducibility of the full run",
           std::to_string(r.records.size()) + " records, " + std::to_string(second.size()) +
               " bytes; rerun with cold caches and 3 workers is " + (second == ndjson ? "byte-identical" : "DIFFERENT"));
  }
  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return failures == 0 ? 0 : 1;
}

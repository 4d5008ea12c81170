#include "rmxs/errors.hpp"
#include "rmxs/harness/config.hpp"
#include "rmxs/harness/explain.hpp"
#include "rmxs/harness/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using namespace rmxs::harness;

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  bool mutate = false;
};

void add_common(CLI::App* app, Common& c) {
  auto* cfg = app->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--preset", c.preset, "built-in configuration (quick, full)")->excludes(cfg);
  app->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 256));
  app->add_option("--seed", c.seed, "override the configured seed");
  app->add_flag("--mutate", c.mutate, "self-test: corrupt one input so that checks must fail");
}

RunConfig resolve(const Common& c) {
  if (!c.config.empty()) return load_config(c.config);
  return preset(c.preset.empty() ? "quick" : c.preset);
}

RunOptions options(const Common& c) {
  RunOptions o;
  o.workers = c.workers;
  o.seed = c.seed;
  o.mutate = c.mutate;
  return o;
}

std::string default_out() {
  const char* env = std::getenv("RMXS_OUT_DIR");
  return env && *env ? env : "rmxs-out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rmxs: numerical and exact checks for sourced Hermitian matrix models"};
  app.require_subcommand(1);

  Common run_opts;
  std::string filter;
  run_opts.out = default_out();
  auto* run_cmd = app.add_subcommand("run", "run the configured suites and write the reports");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--out", run_opts.out, "report directory (default $RMXS_OUT_DIR or rmxs-out)");
  run_cmd->add_option("--filter", filter, "only checks whose id contains this text");

  Common explain_opts;
  std::string id, results;
  auto* explain_cmd = app.add_subcommand("explain", "explain one check by id");
  add_common(explain_cmd, explain_opts);
  explain_cmd->add_option("id", id, "check id as printed in results.csv")->required();
  explain_cmd->add_option("--results", results, "read the record from a results.ndjson instead of rerunning");

  auto* list_cmd = app.add_subcommand("list-suites", "list the suites and what each one checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*list_cmd) {
      for (const auto& name : suite_names()) {
        const SuiteDescription& d = describe_suite(name);
        std::cout << name << "\n  " << d.title << "\n  " << d.statement << "\n  verdict: " << d.verdict << "\n";
      }
      return 0;
    }
    if (*run_cmd) {
      const RunConfig cfg = resolve(run_opts);
      RunOptions o = options(run_opts);
      o.out_dir = run_opts.out;
      o.filter = filter;
      const RunResult r = run(cfg, o);
      RunConfig shown = cfg;
      if (o.seed) shown.seed = *o.seed;
      std::cout << summary_text(shown, r) << "reports written to " << o.out_dir << "\n";
      return r.exit_code;
    }
    if (*explain_cmd) {
      if (!results.empty()) {
        const auto records = read_results(results);
        std::vector<std::string> ids;
        for (const auto& r : records) {
          if (r.id() == id) {
            std::cout << explain_record(r);
            return 0;
          }
          ids.push_back(r.id());
        }
        const std::string near = nearest_id(id, ids);
        throw rmxs::ConfigError("unknown check id '" + id + "'" + (near.empty() ? "" : "; nearest is '" + near + "'"));
      }
      std::cout << explain(resolve(explain_opts), id, options(explain_opts));
      return 0;
    }
  } catch (const rmxs::ConfigError& e) {
    std::cerr << "rmxs: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rmxs: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

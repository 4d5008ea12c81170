#include "rmxs/errors.hpp"
#include "rmxs/harness/config.hpp"
#include "rmxs/harness/explain.hpp"
#include "rmxs/harness/runner.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rmxs;
using namespace rmxs::harness;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSmall = R"cfg({
  "schema": "rmxs-config/1",
  "name": "small",
  "seed": 11,
  "suites": ["identity", "hirota", "mc", "structural"],
  "identity": {"weights": ["gaussian"], "d": [2, 3], "m": [1, 2], "sources": ["1/2", "0.9"],
               "regions": ["[1,inf)"], "s": ["1"]},
  "hirota": {"weights": ["gaussian"], "d_max": 2, "D": 3},
  "mc": {"d": [2], "m": [1], "sources": ["1/2"], "regions": ["[1,inf)"], "s": ["1"], "N": 4000},
  "structural": {"schur_trials": 2, "dodgson_trials": 1, "dodgson_sizes": [3], "gram_n": 6,
                 "gram_weights": ["gaussian"], "zhat_weights": ["gaussian"], "zhat_d": [2],
                 "zhat_tuples": 2, "zhat_max_weight": 40}
})cfg";

}  // namespace

TEST_CASE("presets parse and match the shipped config files") {
  for (const auto& name : preset_names()) {
    CHECK(preset_text(name) == slurp(std::string(RMXS_CONFIG_DIR) + "/" + name + ".json"));
    const RunConfig cfg = preset(name);
    CHECK(cfg.name == name);
    CHECK(cfg.suites.size() == suite_names().size());
  }
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("config diagnostics locate the problem") {
  const std::string syntax = config_error("{\n  \"schema\": \"rmxs-config/1\",\n  \"suites\": [\"mc\",]\n}");
  CHECK(syntax.find("test.json:3:") == 0);

  std::string text = kSmall;
  text.replace(text.find("\"d_max\""), 7, "\"dmax\"");
  CHECK(config_error(text).find("test.json:/hirota") == 0);

  text = kSmall;
  text.replace(text.find("\"1/2\", \"0.9\""), 12, "\"1/2\", \"0.5\"");
  CHECK(config_error(text).find("/identity/sources") != std::string::npos);

  text = kSmall;
  text.replace(text.find("\"hirota\", "), 10, "\"hirota\", \"fay\", ");
  CHECK(config_error(text).find("fay") != std::string::npos);

  CHECK(config_error(R"({"schema": "rmxs-config/2", "suites": []})").find("/schema") != std::string::npos);
}

TEST_CASE("format_rational") {
  CHECK(format_rational(Rational(1, 2)) == "0.5");
  CHECK(format_rational(Rational(-3, 40)) == "-0.075");
  CHECK(format_rational(Rational(1, 3)) == "1/3");
  CHECK(format_rational(Rational(7)) == "7");
}

TEST_CASE("a small run passes and is reproducible across worker counts") {
  const RunConfig cfg = parse_config(kSmall, "small");
  RunOptions one;
  const RunResult a = run(cfg, one);
  CHECK(a.exit_code == 0);
  CHECK(a.stats.at("identity").pass == 6);
  CHECK(a.stats.at("hirota").pass == 3);
  RunOptions three;
  three.workers = 3;
  const RunResult b = run(cfg, three);
  CHECK(results_ndjson(a.records) == results_ndjson(b.records));

  RunOptions reseeded;
  reseeded.seed = 12;
  reseeded.filter = "mc:";
  const RunResult c = run(cfg, reseeded);
  REQUIRE(c.records.size() == 1);
  CHECK(c.records[0].data["inputs"]["seed"] == 12);
}

TEST_CASE("reports are written to the output directory") {
  const auto dir = std::filesystem::temp_directory_path() / "rmxs_harness_test";
  std::filesystem::remove_all(dir);
  RunOptions o;
  o.out_dir = dir.string();
  o.filter = "structural:";
  const RunResult r = run(parse_config(kSmall, "small"), o);
  for (const char* f : {"results.ndjson", "results.csv", "summary.txt", "timing.csv"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(read_results((dir / "results.ndjson").string()).size() == r.records.size());
  CHECK(slurp((dir / "summary.txt").string()).find("result: PASS") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("mutation makes the checks fail") {
  const RunConfig cfg = parse_config(kSmall, "small");
  RunOptions o;
  o.mutate = true;
  const RunResult r = run(cfg, o);
  CHECK(r.exit_code == 1);
  CHECK(r.stats.at("mc").fail == 1);
  CHECK(r.stats.at("hirota").fail > 0);
  CHECK(r.stats.at("identity").fail > 0);
  CHECK(r.stats.at("structural").fail > 0);
}

TEST_CASE("explain") {
  const RunConfig cfg = parse_config(kSmall, "small");
  const std::string text = explain(cfg, "hirota:gaussian:d1=2:d2=0:D=3", {});
  CHECK(text.find("Hirota bilinear identity") != std::string::npos);
  CHECK(text.find("status: pass") != std::string::npos);
  try {
    explain(cfg, "hirota:gaussian:d1=2:d2=0:D=4", {});
    FAIL("unknown id accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("nearest is 'hirota:gaussian:d1=2:d2=0:D=3'") != std::string::npos);
  }
  for (const auto& s : suite_names()) CHECK_FALSE(describe_suite(s).statement.empty());
}

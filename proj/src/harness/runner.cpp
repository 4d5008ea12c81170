#include "rmxs/harness/runner.hpp"

#include "rmxs/errors.hpp"
#include "rmxs/matrix_model.hpp"
#include "rmxs/mc.hpp"
#include "rmxs/ortho.hpp"
#include "rmxs/schur.hpp"
#include "rmxs/tau.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace rmxs::harness {

namespace {

// binary128 unit roundoff; condition * eps bounds rounding in a determinant.
constexpr double kRealEps = 1.93e-34;

Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(format_rational(x));
  return a;
}

std::string join(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_rational(v[i]);
  return out;
}

Record make(const std::string& suite, const std::string& id, Json inputs) {
  Record r;
  r.data = Json::object();
  r.data["id"] = id;
  r.data["suite"] = suite;
  r.data["exploratory"] = false;
  r.data["inputs"] = std::move(inputs);
  r.data["values"] = Json::object();
  r.data["status"] = kError;
  return r;
}

void set_metric(Record& r, const char* name, double measure, double tolerance) {
  r.data["metric"] = name;
  r.data["measure"] = num(measure);
  r.data["tolerance"] = num(tolerance);
}

std::vector<std::vector<Rational>> subsets(const std::vector<Rational>& pool, int m) {
  std::vector<std::vector<Rational>> out;
  const int n = static_cast<int>(pool.size());
  if (m > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<Rational> s;
    for (int i : idx) s.push_back(pool[static_cast<std::size_t>(i)]);
    out.push_back(std::move(s));
    int k = m - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - m + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

SourceModel source_model(int d, const std::vector<Rational>& a, const Weight& w) {
  SourceModel m{d, {}, w};
  for (const auto& x : a) m.sources.push_back({x, 1});
  return m;
}

// The first source the weight cannot dominate, if any.
std::optional<Rational> untiltable(const Weight& w, const std::vector<Rational>& a) {
  for (const auto& x : a)
    if (!(to_double(x) < w.max_tilt())) return x;
  return std::nullopt;
}

void fill_report(Record& r, const IdentityReport& rep, double tol) {
  Json& v = r.data["values"];
  v["lhs"] = to_string(rep.lhs);
  v["rhs"] = to_string(rep.rhs);
  v["abs_err"] = num(rep.abs_err);
  v["rel_err"] = num(rep.rel_err);
  v["noise"] = num(rep.noise);
  v["condition"] = num(rep.condition);
  v["min_gap"] = num(rep.min_gap);
  v["det_magnitude"] = num(rep.det_magnitude);
  const double floor = rep.noise + rep.condition * kRealEps;
  v["noise_floor"] = num(floor);
  set_metric(r, "rel_err", rep.rel_err, tol);
  if (rep.rel_err < tol)
    r.data["status"] = kPass;
  else if (floor >= tol)
    r.data["status"] = kInconclusive;
  else
    r.data["status"] = kFail;
}

void fill_residual(Record& r, const QSeries& residual, std::size_t reference_terms) {
  const auto v = violations(residual);
  Json& values = r.data["values"];
  values["violations"] = v.size();
  values["reference_terms"] = reference_terms;
  Json first = Json::array();
  for (std::size_t i = 0; i < v.size() && i < 5; ++i) first.push_back({{"monomial", v[i].monomial}, {"coefficient", v[i].coefficient}});
  values["first_violations"] = std::move(first);
  set_metric(r, "violations", static_cast<double>(v.size()), 0.0);
  r.data["status"] = v.empty() ? kPass : kFail;
}

Record skipped(const std::string& suite, const std::string& id, Json inputs, const std::string& why) {
  Record r = make(suite, id, std::move(inputs));
  r.data["status"] = kSkipped;
  r.data["message"] = why;
  return r;
}

Job single(const std::string& suite, const std::string& id, std::function<Record()> f) {
  return Job{suite, {id}, [f = std::move(f)] { return std::vector<Record>{f()}; }};
}

Job skip_job(const std::string& suite, const std::string& id, Json inputs, std::string why) {
  return single(suite, id, [=] { return skipped(suite, id, inputs, why); });
}

// ---------------------------------------------------------------- identity

void plan_identity(const RunConfig& cfg, const ModelOptions& mopts, std::vector<Job>& jobs) {
  const IdentityGrid& g = *cfg.identity;
  const double tol = cfg.tol.identity_rel;
  for (const auto& wname : g.weights) {
    const Weight w = parse_weight(wname);
    for (int d : g.d)
      for (int m : g.m) {
        if (m > d) continue;
        for (const auto& a : subsets(g.sources, m))
          for (const auto& region : g.regions) {
            std::vector<std::pair<Rational, bool>> svals;
            for (const auto& s : g.s) svals.push_back({s, false});
            for (const auto& s : g.exploratory_s) svals.push_back({s, true});
            for (const auto& [s, exploratory] : svals) {
              const std::string id = "identity:" + wname + ":d=" + std::to_string(d) + ":a=" + join(a) +
                                     ":E=" + region.str() + ":s=" + format_rational(s);
              Json inputs = {{"weight", wname}, {"d", d}, {"a", rationals_json(a)}, {"E", region.str()},
                             {"s", format_rational(s)}};
              if (auto bad = untiltable(w, a)) {
                jobs.push_back(skip_job("identity", id, inputs,
                                        "source " + format_rational(*bad) + " is not integrable against " + wname));
                continue;
              }
              jobs.push_back(single("identity", id, [=] {
                Record r = make("identity", id, inputs);
                r.data["exploratory"] = exploratory;
                const ExpectationQuery q{source_model(d, a, w), region, s};
                fill_report(r, verify_main_identity(q, mopts), tol);
                return r;
              }));
            }
          }
      }
  }
}

void plan_z_ratio(const RunConfig& cfg, const ModelOptions& mopts, std::vector<Job>& jobs) {
  const ZRatioGrid& g = *cfg.z_ratio;
  const double tol = cfg.tol.identity_rel;
  for (const auto& wname : g.weights) {
    const Weight base = parse_weight(wname);
    struct Variant {
      std::string suffix;
      std::optional<IntervalSet> region;
      Rational s;
    };
    std::vector<Variant> variants;
    if (g.base) variants.push_back({"", std::nullopt, Rational(0)});
    for (const auto& region : g.regions)
      for (const auto& s : g.s) variants.push_back({":E=" + region.str() + ":s=" + format_rational(s), region, s});
    for (int d : g.d)
      for (int m : g.m) {
        if (m > d) continue;
        for (const auto& a : subsets(g.sources, m))
          for (const auto& v : variants) {
            const std::string id = "z-ratio:" + wname + ":d=" + std::to_string(d) + ":a=" + join(a) + v.suffix;
            Json inputs = {{"weight", wname}, {"d", d}, {"a", rationals_json(a)}};
            if (v.region) {
              inputs["E"] = v.region->str();
              inputs["s"] = format_rational(v.s);
            }
            if (auto bad = untiltable(base, a)) {
              jobs.push_back(skip_job("z-ratio", id, inputs,
                                      "source " + format_rational(*bad) + " is not integrable against " + wname));
              continue;
            }
            jobs.push_back(single("z-ratio", id, [=] {
              Record r = make("z-ratio", id, inputs);
              const Weight w = v.region ? deform_weight(base, *v.region, v.s) : base;
              fill_report(r, z_ratio_det_check(w, d, a, mopts), tol);
              return r;
            }));
          }
      }
  }
}

// -------------------------------------------------------------------- tau

TauConfig tau_config(const std::string& wname, int D, int dmax, bool mutate) {
  TauConfig c;
  c.weight = parse_weight(wname);
  c.D = D;
  c.dmax = dmax;
  c.corrupt_m4 = mutate;
  return c;
}

void plan_ladder(const RunConfig& cfg, bool mutate, std::vector<Job>& jobs) {
  const LadderGrid& g = *cfg.ladder;
  for (const auto& wname : g.weights)
    for (int d : g.d) {
      const std::string id = "vertex-ladder:" + wname + ":d=" + std::to_string(d) + ":D=" + std::to_string(g.D);
      const Json inputs = {{"weight", wname}, {"d", d}, {"D", g.D}};
      const int D = g.D;
      jobs.push_back(single("vertex-ladder", id, [=] {
        Record r = make("vertex-ladder", id, inputs);
        const TauConfig target_cfg = tau_config(wname, D, d + 1, mutate);
        const TauConfig clean = tau_config(wname, D, d + 1, false);
        const QSeries target = zhat_series(target_cfg, d + 1);
        const QSeries paired = nu_pair(clean, d, vertex_apply(clean, d, -d, D));
        fill_residual(r, paired - target, target.size());
        return r;
      }));
    }
}

void plan_hirota(const RunConfig& cfg, bool mutate, std::vector<Job>& jobs) {
  const HirotaGrid& g = *cfg.hirota;
  for (const auto& wname : g.weights)
    for (int d1 = 1; d1 <= g.d_max; ++d1)
      for (int d2 = 0; d2 < d1; ++d2) {
        const std::string id = "hirota:" + wname + ":d1=" + std::to_string(d1) + ":d2=" + std::to_string(d2) +
                               ":D=" + std::to_string(g.D);
        const Json inputs = {{"weight", wname}, {"d1", d1}, {"d2", d2}, {"D", g.D}};
        const int D = g.D;
        jobs.push_back(single("hirota", id, [=] {
          Record r = make("hirota", id, inputs);
          fill_residual(r, hirota_residual(tau_config(wname, D, d1 + 1, mutate), d1, d2), 0);
          r.data["values"].erase("reference_terms");
          return r;
        }));
      }
}

void plan_fay(const RunConfig& cfg, bool mutate, bool det, std::vector<Job>& jobs) {
  const FayGrid& g = det ? *cfg.fay_det : *cfg.fay;
  const std::string suite = det ? "fay-det" : "fay";
  for (const auto& wname : g.weights)
    for (int d : g.d)
      for (const auto& pts : g.points) {
        if (det && static_cast<int>(pts.size()) > d) continue;
        std::string id = suite + ":" + wname + ":d=" + std::to_string(d);
        id += det ? ":a=" + join(pts) : ":a=" + format_rational(pts[0]) + ":b=" + format_rational(pts[1]);
        id += ":D=" + std::to_string(g.D);
        Json inputs = {{"weight", wname}, {"d", d}, {"D", g.D}};
        if (det) {
          inputs["a"] = rationals_json(pts);
        } else {
          inputs["a"] = format_rational(pts[0]);
          inputs["b"] = format_rational(pts[1]);
        }
        const int D = g.D;
        jobs.push_back(single(suite, id, [=] {
          Record r = make(suite, id, inputs);
          const TauConfig c = tau_config(wname, D, d, mutate);
          fill_residual(r, det ? fay_det_residual(c, d, pts) : fay_residual(c, d, pts[0], pts[1]), 0);
          r.data["values"].erase("reference_terms");
          return r;
        }));
      }
}

// --------------------------------------------------------------------- mc

void plan_mc(const RunConfig& cfg, const ModelOptions& mopts, std::vector<Job>& jobs) {
  const McGrid& g = *cfg.mc;
  const double tol = cfg.tol.mc_z;
  const std::uint64_t seed = cfg.seed;
  for (int d : g.d)
    for (int m : g.m) {
      if (m > d) continue;
      for (const auto& a : subsets(g.sources, m)) {
        std::vector<McTarget> targets;
        std::vector<std::string> ids;
        for (const auto& region : g.regions)
          for (const auto& s : g.s) {
            targets.push_back({region, s});
            ids.push_back("mc:gaussian:d=" + std::to_string(d) + ":a=" + join(a) + ":E=" + region.str() +
                          ":s=" + format_rational(s));
          }
        const long N = g.N;
        jobs.push_back(Job{"mc", ids, [=] {
                             const SourceModel model = source_model(d, a, Weight::gaussian());
                             McOptions o;
                             o.N = N;
                             o.seed = seed;
                             const auto est = estimate_expectations(model, targets, o);
                             std::vector<Record> out;
                             for (std::size_t i = 0; i < targets.size(); ++i) {
                               Record r = make("mc", ids[i],
                                               {{"weight", "gaussian"},
                                                {"d", d},
                                                {"a", rationals_json(a)},
                                                {"E", targets[i].region.str()},
                                                {"s", format_rational(targets[i].s)},
                                                {"N", N},
                                                {"seed", seed}});
                               try {
                                 const double quad = static_cast<double>(
                                     expectation({model, targets[i].region, targets[i].s}, mopts).value);
                                 const CrossCheck c = compare(est[i], quad, tol);
                                 Json& v = r.data["values"];
                                 v["mc_mean"] = num(c.mc.mean);
                                 v["mc_stderr"] = num(c.mc.stderr_);
                                 v["quadrature"] = num(c.quadrature);
                                 v["z"] = num(c.z);
                                 set_metric(r, "z", c.z, tol);
                                 r.data["status"] = c.pass ? kPass : kFail;
                               } catch (const std::exception& e) {
                                 r.data["status"] = kError;
                                 r.data["message"] = e.what();
                               }
                               out.push_back(std::move(r));
                             }
                             return out;
                           }});
      }
    }
}

// ------------------------------------------------------------- structural

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  int n = 0;
  while (n == 0) n = num(rng);
  return Rational(n, den(rng));
}

void plan_structural(const RunConfig& cfg, bool mutate, std::vector<Job>& jobs) {
  const StructuralGrid& g = *cfg.structural;
  const std::uint64_t seed = cfg.seed;
  for (int trial = 0; trial < g.schur_trials; ++trial) {
    const std::string id = "structural:schur-jt:trial=" + std::to_string(trial);
    jobs.push_back(single("structural", id, [=] {
      std::mt19937_64 rng(derive_stream(seed, id));
      const int n = 1 + trial % 4;
      std::vector<Rational> a;
      while (static_cast<int>(a.size()) < n) {
        const Rational x = random_rational(rng, 9, 7);
        if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
      }
      Record r = make("structural", id, {{"kind", "schur-jt"}, {"points", rationals_json(a)}, {"max_weight", 6}});
      int checked = 0, mismatches = 0;
      for (const Partition& kappa : partitions(n, 6)) {
        ++checked;
        if (schur_poly(kappa, a) != schur_poly_alternant(kappa, a)) ++mismatches;
      }
      r.data["values"] = {{"partitions", checked}, {"mismatches", mismatches}};
      set_metric(r, "mismatches", mismatches, 0.0);
      r.data["status"] = mismatches == 0 ? kPass : kFail;
      return r;
    }));
  }
  for (int n : g.dodgson_sizes)
    for (int trial = 0; trial < g.dodgson_trials; ++trial) {
      const std::string id = "structural:dodgson:n=" + std::to_string(n) + ":trial=" + std::to_string(trial);
      jobs.push_back(single("structural", id, [=] {
        std::mt19937_64 rng(derive_stream(seed, id));
        const auto un = static_cast<std::size_t>(n);
        DenseMatrix<Rational> m(un, un, Rational(0));
        for (std::size_t i = 0; i < un; ++i)
          for (std::size_t j = 0; j < un; ++j) m(i, j) = random_rational(rng, 9, 5);
        Record r = make("structural", id, {{"kind", "dodgson"}, {"n", n}, {"trial", trial}});
        const Rational res = dodgson_residual(m);
        r.data["values"] = {{"residual", to_string(res)}, {"det", to_string(det_exact(m))}};
        set_metric(r, "residual", to_double(res), 0.0);
        r.data["status"] = res == 0 ? kPass : kFail;
        return r;
      }));
    }
  for (const auto& wname : g.gram_weights) {
    const std::string id = "structural:gram:" + wname + ":n=" + std::to_string(g.gram_n);
    const int n = g.gram_n;
    const double tol = cfg.tol.gram;
    jobs.push_back(single("structural", id, [=] {
      Record r = make("structural", id, {{"kind", "gram"}, {"weight", wname}, {"n", n}});
      const double defect = gram_defect(orthonormal_basis(parse_weight(wname), n));
      r.data["values"] = {{"gram_defect", num(defect)}};
      set_metric(r, "gram_defect", defect, tol);
      r.data["status"] = defect < tol ? kPass : kFail;
      return r;
    }));
  }
  for (const auto& wname : g.zhat_weights)
    for (int d : g.zhat_d) {
      const std::string id = "structural:zhat-propto-z:" + wname + ":d=" + std::to_string(d);
      const int tuples = g.zhat_tuples;
      const int max_weight = g.zhat_max_weight;
      const double tol = cfg.tol.zhat_spread;
      jobs.push_back(single("structural", id, [=] {
        std::mt19937_64 rng(derive_stream(seed, id));
        const Weight w = parse_weight(wname);
        // Miwa sums converge geometrically for the Laguerre moments only when |a| < 1.
        std::uniform_int_distribution<int> pick(1, w.kind() == WeightKind::Laguerre ? 5 : 9);
        TauConfig tc;
        tc.weight = w;
        tc.D = 4;
        tc.dmax = d;
        tc.corrupt_m4 = mutate;
        Json tuple_list = Json::array();
        Json ratios = Json::array();
        std::vector<Real> rs;
        for (int t = 0; t < tuples; ++t) {
          std::vector<Rational> a;
          while (static_cast<int>(a.size()) < d) {
            const Rational x(pick(rng), 10);
            if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
          }
          const Real z = partition_fn(source_model(d, a, w)).value;
          const Real zh = to_real(zhat_eval(tc, d, a, max_weight));
          rs.push_back(z / zh);
          tuple_list.push_back(rationals_json(a));
          ratios.push_back(to_string(rs.back()));
        }
        double spread = 0;
        for (const auto& x : rs) spread = std::max(spread, std::fabs(static_cast<double>(x / rs[0] - 1)));
        Record r = make("structural", id,
                        {{"kind", "zhat-propto-z"}, {"weight", wname}, {"d", d}, {"tuples", tuple_list},
                         {"max_weight", max_weight}});
        r.data["values"] = {{"ratios", ratios}, {"spread", num(spread)}};
        set_metric(r, "spread", spread, tol);
        r.data["status"] = spread < tol ? kPass : kFail;
        return r;
      }));
    }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "";
  return j.dump();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

}  // namespace

const std::string& Record::id() const { return data.at("id").get_ref<const std::string&>(); }
std::string Record::suite() const { return data.at("suite").get<std::string>(); }
std::string Record::status() const { return data.at("status").get<std::string>(); }
bool Record::exploratory() const { return data.value("exploratory", false); }
bool Record::counts_as_failure() const {
  const std::string s = status();
  return !exploratory() && (s == kFail || s == kError);
}

std::string format_rational(const Rational& q) {
  // Terminating decimal iff the reduced denominator has no prime factor other than 2 and 5.
  Integer den = boost::multiprecision::denominator(q);
  int twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return to_string(q);
  const int digits = std::max(twos, fives);
  if (digits == 0) return to_string(q);
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const Rational scaled = q * Rational(scale);
  Integer n = boost::multiprecision::numerator(scaled);
  const bool negative = n < 0;
  if (negative) n = -n;
  std::string text = n.str();
  if (static_cast<int>(text.size()) <= digits) text = std::string(static_cast<std::size_t>(digits) + 1 - text.size(), '0') + text;
  text.insert(text.size() - static_cast<std::size_t>(digits), ".");
  return (negative ? "-" : "") + text;
}

std::vector<Job> plan(const RunConfig& cfg_in, const RunOptions& opts) {
  RunConfig cfg = cfg_in;
  if (opts.seed) cfg.seed = *opts.seed;
  ModelOptions mopts;
  mopts.corrupt_deformed_moment = opts.mutate;
  std::vector<Job> jobs;
  for (const auto& suite : cfg.suites) {
    if (suite == "identity") plan_identity(cfg, mopts, jobs);
    if (suite == "z-ratio") plan_z_ratio(cfg, mopts, jobs);
    if (suite == "vertex-ladder") plan_ladder(cfg, opts.mutate, jobs);
    if (suite == "hirota") plan_hirota(cfg, opts.mutate, jobs);
    if (suite == "fay") plan_fay(cfg, opts.mutate, false, jobs);
    if (suite == "fay-det") plan_fay(cfg, opts.mutate, true, jobs);
    if (suite == "mc") plan_mc(cfg, mopts, jobs);
    if (suite == "structural") plan_structural(cfg, opts.mutate, jobs);
  }
  if (!opts.filter.empty()) {
    std::vector<Job> kept;
    for (auto& j : jobs)
      if (std::any_of(j.ids.begin(), j.ids.end(), [&](const std::string& id) { return id.find(opts.filter) != std::string::npos; }))
        kept.push_back(std::move(j));
    jobs = std::move(kept);
  }
  return jobs;
}

RunResult run(const RunConfig& cfg, const RunOptions& opts) {
  std::vector<Job> jobs = plan(cfg, opts);
  std::vector<std::vector<Record>> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<Record> recs;
      try {
        recs = jobs[i].run();
      } catch (const std::exception& e) {
        recs.clear();
        for (const auto& id : jobs[i].ids) {
          Record r = make(jobs[i].suite, id, Json::object());
          r.data["message"] = e.what();
          recs.push_back(std::move(r));
        }
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (auto& r : recs) r.seconds = secs / static_cast<double>(recs.size());
      out[i] = std::move(recs);
    }
  };
  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RunResult result;
  for (auto& recs : out)
    for (auto& r : recs) {
      if (!opts.filter.empty() && r.id().find(opts.filter) == std::string::npos) continue;
      SuiteStats& st = result.stats[r.suite()];
      ++st.total;
      st.seconds += r.seconds;
      const std::string s = r.status();
      if (r.exploratory())
        ++st.exploratory;
      else if (s == kPass)
        ++st.pass;
      else if (s == kFail)
        ++st.fail;
      else if (s == kInconclusive)
        ++st.inconclusive;
      else if (s == kSkipped)
        ++st.skipped;
      else
        ++st.error;
      if (!r.exploratory() && r.data.contains("measure") && r.data["measure"].is_number())
        st.worst = std::max(st.worst, r.data["measure"].get<double>());
      if (r.counts_as_failure()) result.exit_code = 1;
      result.records.push_back(std::move(r));
    }

  if (!opts.out_dir.empty()) {
    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "results.ndjson", results_ndjson(result.records));
    write_file(dir / "results.csv", results_csv(result.records));
    RunConfig shown = cfg;
    if (opts.seed) shown.seed = *opts.seed;
    write_file(dir / "summary.txt", summary_text(shown, result));
    std::ostringstream timing;
    timing << "id,suite,seconds\n";
    for (const auto& r : result.records)
      timing << csv_field(r.id()) << "," << r.suite() << "," << std::setprecision(6) << r.seconds << "\n";
    write_file(dir / "timing.csv", timing.str());
  }
  return result;
}

std::string results_ndjson(const std::vector<Record>& records) {
  std::string out;
  for (const auto& r : records) out += r.data.dump() + "\n";
  return out;
}

std::string results_csv(const std::vector<Record>& records) {
  std::string out = "id,suite,status,exploratory,metric,measure,tolerance\n";
  for (const auto& r : records) {
    out += csv_field(r.id()) + "," + r.suite() + "," + r.status() + "," + (r.exploratory() ? "true" : "false") + ",";
    out += json_scalar_text(r.data.value("metric", Json())) + ",";
    out += json_scalar_text(r.data.value("measure", Json())) + ",";
    out += json_scalar_text(r.data.value("tolerance", Json())) + "\n";
  }
  return out;
}

std::string summary_text(const RunConfig& cfg, const RunResult& result) {
  std::ostringstream o;
  o << "rmxs run: " << (cfg.name.empty() ? "(unnamed)" : cfg.name) << ", seed " << cfg.seed << "\n\n";
  o << std::left << std::setw(15) << "suite" << std::right << std::setw(7) << "total" << std::setw(7) << "pass"
    << std::setw(7) << "fail" << std::setw(8) << "inconcl" << std::setw(8) << "skipped" << std::setw(7) << "error"
    << std::setw(8) << "explor" << std::setw(13) << "worst" << std::setw(11) << "seconds" << "\n";
  for (const auto& suite : suite_names()) {
    auto it = result.stats.find(suite);
    if (it == result.stats.end()) continue;
    const SuiteStats& s = it->second;
    o << std::left << std::setw(15) << suite << std::right << std::setw(7) << s.total << std::setw(7) << s.pass
      << std::setw(7) << s.fail << std::setw(8) << s.inconclusive << std::setw(8) << s.skipped << std::setw(7)
      << s.error << std::setw(8) << s.exploratory << std::setw(13) << std::setprecision(3) << std::scientific
      << s.worst << std::defaultfloat << std::setw(11) << std::fixed << std::setprecision(2) << s.seconds
      << std::defaultfloat << "\n";
  }
  std::vector<const Record*> bad, explor_bad;
  for (const auto& r : result.records) {
    if (r.counts_as_failure()) bad.push_back(&r);
    if (r.exploratory() && r.status() != kPass) explor_bad.push_back(&r);
  }
  if (!bad.empty()) {
    o << "\nfailures:\n";
    for (const Record* r : bad) {
      o << "  " << r->id() << "  " << r->status();
      if (r->data.contains("message")) o << "  " << r->data["message"].get<std::string>();
      o << "\n";
    }
  }
  if (!explor_bad.empty()) {
    o << "\nexploratory records not passing (not counted):\n";
    for (const Record* r : explor_bad) o << "  " << r->id() << "  " << r->status() << "\n";
  }
  o << "\nworst = largest measured metric among counted records (rel_err, z, violations, ...)\n";
  o << "result: " << (result.exit_code == 0 ? "PASS" : "FAIL") << "\n";
  return o.str();
}

}  // namespace rmxs::harness

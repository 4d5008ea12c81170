#include "rmxs/harness/explain.hpp"

#include "rmxs/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace rmxs::harness {

namespace {

const std::map<std::string, SuiteDescription>& descriptions() {
  static const std::map<std::string, SuiteDescription> table = {
      {"identity",
       {"identity", "rank reduction of the deformed-weight expectation",
        "E_d(a_1..a_m; E; s) / E_d(E; s) = det[Gamma_{d-j}(a_k) Ebar_{d-j+1}(a_k; E; s)] / det[Gamma_{d-j}(a_k)], "
        "j, k = 1..m. The left side comes from Andreief determinants of the deformed and undeformed weights; "
        "the right side from rank-1 ratios built on the orthogonal polynomials of W and W_{E,s}.",
        "pass if rel_err < tolerance; inconclusive if rel_err >= tolerance but the propagated noise floor "
        "(quadrature noise + condition * binary128 eps) also reaches the tolerance; fail otherwise"}},
      {"z-ratio",
       {"z-ratio", "partition-function ratio as an m x m determinant",
        "Z_d(a_1..a_m) / Z_d(0) = det[a_k^{m-j} Z_{d+1-j}(a_k) / Z_{d+1-j}(0)] / prod_{j<k}(a_j - a_k), for the "
        "base weight and for each deformation W_{E,s}.",
        "as for identity"}},
      {"vertex-ladder",
       {"vertex-ladder", "vertex-operator ladder on the tau vector",
        "Zhat_{d+1}(t) = Res_z nu_d(z) X(z) Zhat_d(t), with X(z) = exp(sum t_j z^j) exp(-sum z^-j/j d/dt_j), "
        "compared coefficient by coefficient in exact rational arithmetic up to the weighted-degree cap D.",
        "pass iff every coefficient of the difference vanishes"}},
      {"hirota",
       {"hirota", "Hirota bilinear identity",
        "Res_z z^{d1-d2-1} Zhat_{d1}(t~ - [z^-1]) Zhat_{d2+1}(t + [z^-1]) exp(sum (t~_j - t_j) z^j) = 0 for "
        "d1 > d2, in the joint grading of t and t~ up to the cap D.",
        "pass iff the residual has no nonzero coefficient"}},
      {"fay",
       {"fay", "three-point Fay identity",
        "(a - b) Zhat_d(t + [a] + [b]) Zhat_{d-1}(t) = a Zhat_d(t + [a]) Zhat_{d-1}(t + [b]) - b Zhat_d(t + [b]) "
        "Zhat_{d-1}(t + [a]), exact up to the cap D.",
        "pass iff the residual has no nonzero coefficient"}},
      {"fay-det",
       {"fay-det", "determinantal Fay identity",
        "Delta_m(a) Zhat_d(t + sum_k [a_k]) prod_j Zhat_{d+1-j}(t) = Zhat_d(t) det[a_k^{m-j} Zhat_{d+1-j}(t + [a_k])], "
        "j, k = 1..m, cleared of denominators, exact up to the cap D.",
        "pass iff the residual has no nonzero coefficient"}},
      {"mc",
       {"mc", "Monte Carlo cross-check",
        "E_d(a; E; s) from N Hermitian samples of the spiked GUE against the quadrature value; z = |mc - quad| / "
        "stderr.",
        "pass iff z <= tolerance"}},
      {"structural",
       {"structural", "structural checks",
        "Jacobi-Trudi against the alternant formula for Schur polynomials; Desnanot-Jacobi condensation; "
        "orthonormality of the computed polynomial bases; proportionality of Z_d(a) and the Miwa evaluation of "
        "Zhat_d over several source tuples.",
        "exact equality, or the stated metric below its tolerance"}},
  };
  return table;
}

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void dump_object(std::ostringstream& o, const Json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    o << "  " << it.key() << ": ";
    if (it->is_string())
      o << it->get<std::string>();
    else
      o << it->dump();
    o << "\n";
  }
}

}  // namespace

const SuiteDescription& describe_suite(const std::string& suite) {
  const auto& t = descriptions();
  auto it = t.find(suite);
  if (it == t.end()) throw ConfigError("unknown suite '" + suite + "'");
  return it->second;
}

std::string explain_record(const Record& r) {
  const SuiteDescription& s = describe_suite(r.suite());
  std::ostringstream o;
  o << r.id() << "\n\n";
  o << s.title << "\n  " << s.statement << "\n\n";
  o << "inputs:\n";
  dump_object(o, r.data.value("inputs", Json::object()));
  o << "values:\n";
  dump_object(o, r.data.value("values", Json::object()));
  o << "\nverdict rule: " << s.verdict << "\n";
  if (r.data.contains("metric"))
    o << "metric: " << r.data["metric"].get<std::string>() << " = " << r.data["measure"].dump()
      << ", tolerance " << r.data["tolerance"].dump() << "\n";
  if (r.data.contains("message")) o << "message: " << r.data["message"].get<std::string>() << "\n";
  o << "status: " << r.status() << (r.exploratory() ? " (exploratory, not counted)" : "") << "\n";
  return o.str();
}

std::string nearest_id(const std::string& id, const std::vector<std::string>& known) {
  std::string best;
  int best_d = 0;
  for (const auto& k : known) {
    const int d = levenshtein(id, k);
    if (best.empty() || d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

std::vector<Record> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::vector<Record> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(Record{Json::parse(line), 0.0});
    } catch (const Json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::string explain(const RunConfig& cfg, const std::string& id, const RunOptions& opts) {
  RunOptions o = opts;
  o.filter.clear();
  const std::vector<Job> jobs = plan(cfg, o);
  std::vector<std::string> known;
  for (const auto& j : jobs)
    for (const auto& k : j.ids) {
      if (k != id) {
        known.push_back(k);
        continue;
      }
      for (const Record& r : j.run())
        if (r.id() == id) return explain_record(r);
    }
  const std::string near = nearest_id(id, known);
  throw ConfigError("unknown check id '" + id + "'" + (near.empty() ? "" : "; nearest is '" + near + "'"));
}

}  // namespace rmxs::harness

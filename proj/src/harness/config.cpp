#include "rmxs/harness/config.hpp"

#include "rmxs/errors.hpp"
#include "rmxs/matrix_model.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace rmxs::harness {

namespace detail {
extern const char* const kQuickPreset;
extern const char* const kFullPreset;
}  // namespace detail

namespace {

using json = nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(origin_ + ":" + (path.empty() ? "/" : path) + ": " + what);
  }

  const json& object(const json& j, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
      (void)v;
      if (std::none_of(keys.begin(), keys.end(), [&k](const char* a) { return k == a; }))
        fail(path + "/" + k, "unknown field");
    }
    return j;
  }

  const json* find(const json& obj, const char* key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  const json& require(const json& obj, const std::string& path, const char* key) const {
    const json* v = find(obj, key);
    if (!v) fail(path + "/" + key, "missing required field");
    return *v;
  }

  long integer(const json& j, const std::string& path, long lo, long hi) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    const long v = j.get<long>();
    if (v < lo || v > hi) fail(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    return v;
  }

  double real(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!(v > 0)) fail(path, "expected a positive number");
    return v;
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  bool boolean(const json& j, const std::string& path) const {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }

  Rational rational(const json& j, const std::string& path) const {
    std::string text;
    if (j.is_string())
      text = j.get<std::string>();
    else if (j.is_number())
      text = j.dump();
    else
      fail(path, "expected a number or a rational string such as \"3/10\"");
    try {
      return parse_rational(text);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }

  const json& list(const json& j, const std::string& path, bool nonempty = true) const {
    if (!j.is_array()) fail(path, "expected a list");
    if (nonempty && j.empty()) fail(path, "expected a non-empty list");
    return j;
  }

  std::vector<int> ints(const json& j, const std::string& path, long lo, long hi) const {
    std::vector<int> out;
    const json& l = list(j, path);
    for (std::size_t i = 0; i < l.size(); ++i) out.push_back(static_cast<int>(integer(l[i], path + "/" + std::to_string(i), lo, hi)));
    return out;
  }

  std::vector<Rational> rationals(const json& j, const std::string& path) const {
    std::vector<Rational> out;
    const json& l = list(j, path);
    for (std::size_t i = 0; i < l.size(); ++i) out.push_back(rational(l[i], path + "/" + std::to_string(i)));
    return out;
  }

  std::vector<IntervalSet> regions(const json& j, const std::string& path) const {
    std::vector<IntervalSet> out;
    const json& l = list(j, path);
    for (std::size_t i = 0; i < l.size(); ++i) {
      const std::string p = path + "/" + std::to_string(i);
      try {
        out.push_back(parse_interval_set(string(l[i], p)));
      } catch (const Error& e) {
        fail(p, e.what());
      }
    }
    return out;
  }

  std::vector<std::string> weights(const json& j, const std::string& path, bool exact_only) const {
    std::vector<std::string> out;
    const json& l = list(j, path);
    for (std::size_t i = 0; i < l.size(); ++i) {
      const std::string p = path + "/" + std::to_string(i);
      const std::string name = string(l[i], p);
      Weight w = Weight::gaussian();
      try {
        w = parse_weight(name);
      } catch (const Error& e) {
        fail(p, e.what());
      }
      if (exact_only && !w.exact_moments()) fail(p, "this suite needs a weight with exact moments (gaussian or laguerre)");
      out.push_back(name);
    }
    return out;
  }

  void distinct_nonzero(const std::vector<Rational>& v, const std::string& path) const {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) fail(path + "/" + std::to_string(i), "sources must be nonzero");
      for (std::size_t k = 0; k < i; ++k)
        if (v[k] == v[i]) fail(path + "/" + std::to_string(i), "sources must be distinct");
    }
  }

 private:
  std::string origin_;
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identity", "z-ratio", "vertex-ladder", "hirota",
                                              "fay",      "fay-det", "mc",            "structural"};
  return names;
}

Weight parse_weight(const std::string& name) {
  if (name == "gaussian") return Weight::gaussian();
  if (name == "laguerre") return Weight::laguerre();
  const std::string prefix = "exp-poly:";
  if (name.rfind(prefix, 0) == 0) {
    std::vector<Rational> v;
    std::stringstream ss(name.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
    return Weight::exp_poly(std::move(v));
  }
  throw ConfigError("unknown weight '" + name + "' (expected gaussian, laguerre or exp-poly:v0,v1,...)");
}

bool RunConfig::runs(const std::string& suite) const {
  return std::find(suites.begin(), suites.end(), suite) != suites.end();
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ":" + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON (" + e.what() + ")");
  }
  const Reader r(origin);
  r.object(root, "", {"schema", "name", "seed", "suites", "identity", "z-ratio", "vertex-ladder", "hirota", "fay",
                      "fay-det", "mc", "structural", "tolerances"});
  RunConfig cfg;
  const std::string schema = r.string(r.require(root, "", "schema"), "/schema");
  if (schema != kSchema) r.fail("/schema", "unsupported schema '" + schema + "', expected '" + kSchema + "'");
  if (const json* n = r.find(root, "name")) cfg.name = r.string(*n, "/name");
  if (const json* s = r.find(root, "seed")) {
    if (!s->is_number_unsigned()) r.fail("/seed", "expected a non-negative integer");
    cfg.seed = s->get<std::uint64_t>();
  }

  std::set<std::string> selected;
  const json& suites = r.list(r.require(root, "", "suites"), "/suites");
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const std::string name = r.string(suites[i], "/suites/" + std::to_string(i));
    if (name == "all") {
      selected.insert(suite_names().begin(), suite_names().end());
    } else if (std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end()) {
      selected.insert(name);
    } else {
      r.fail("/suites/" + std::to_string(i), "unknown suite '" + name + "'");
    }
  }
  for (const auto& s : suite_names())
    if (selected.count(s)) {
      if (!r.find(root, s.c_str())) r.fail("/" + s, "suite '" + s + "' is selected but has no grid section");
      cfg.suites.push_back(s);
    }

  if (const json* j = r.find(root, "identity"); j && selected.count("identity")) {
    const std::string p = "/identity";
    r.object(*j, p, {"weights", "d", "m", "sources", "regions", "s", "exploratory_s"});
    IdentityGrid g;
    g.weights = r.weights(r.require(*j, p, "weights"), p + "/weights", false);
    g.d = r.ints(r.require(*j, p, "d"), p + "/d", 1, kMaxDimension);
    g.m = r.ints(r.require(*j, p, "m"), p + "/m", 1, kMaxDimension);
    g.sources = r.rationals(r.require(*j, p, "sources"), p + "/sources");
    r.distinct_nonzero(g.sources, p + "/sources");
    g.regions = r.regions(r.require(*j, p, "regions"), p + "/regions");
    g.s = r.rationals(r.require(*j, p, "s"), p + "/s");
    if (const json* e = r.find(*j, "exploratory_s")) g.exploratory_s = r.rationals(*e, p + "/exploratory_s");
    cfg.identity = std::move(g);
  }
  if (const json* j = r.find(root, "z-ratio"); j && selected.count("z-ratio")) {
    const std::string p = "/z-ratio";
    r.object(*j, p, {"weights", "d", "m", "sources", "regions", "s", "base"});
    ZRatioGrid g;
    g.weights = r.weights(r.require(*j, p, "weights"), p + "/weights", false);
    g.d = r.ints(r.require(*j, p, "d"), p + "/d", 1, kMaxDimension);
    g.m = r.ints(r.require(*j, p, "m"), p + "/m", 1, kMaxDimension);
    g.sources = r.rationals(r.require(*j, p, "sources"), p + "/sources");
    r.distinct_nonzero(g.sources, p + "/sources");
    if (const json* e = r.find(*j, "regions")) g.regions = r.regions(*e, p + "/regions");
    if (const json* e = r.find(*j, "s")) g.s = r.rationals(*e, p + "/s");
    if (g.regions.empty() != g.s.empty()) r.fail(p, "regions and s must be given together");
    if (const json* e = r.find(*j, "base")) g.base = r.boolean(*e, p + "/base");
    cfg.z_ratio = std::move(g);
  }
  if (const json* j = r.find(root, "vertex-ladder"); j && selected.count("vertex-ladder")) {
    const std::string p = "/vertex-ladder";
    r.object(*j, p, {"weights", "d", "D"});
    LadderGrid g;
    g.weights = r.weights(r.require(*j, p, "weights"), p + "/weights", true);
    g.d = r.ints(r.require(*j, p, "d"), p + "/d", 0, 8);
    g.D = static_cast<int>(r.integer(r.require(*j, p, "D"), p + "/D", 1, 12));
    cfg.ladder = std::move(g);
  }
  if (const json* j = r.find(root, "hirota"); j && selected.count("hirota")) {
    const std::string p = "/hirota";
    r.object(*j, p, {"weights", "d_max", "D"});
    HirotaGrid g;
    g.weights = r.weights(r.require(*j, p, "weights"), p + "/weights", true);
    g.d_max = static_cast<int>(r.integer(r.require(*j, p, "d_max"), p + "/d_max", 1, 6));
    g.D = static_cast<int>(r.integer(r.require(*j, p, "D"), p + "/D", 1, 8));
    cfg.hirota = std::move(g);
  }
  for (const char* name : {"fay", "fay-det"}) {
    const json* j = r.find(root, name);
    if (!j || !selected.count(name)) continue;
    const std::string p = std::string("/") + name;
    const bool det = std::string(name) == "fay-det";
    r.object(*j, p, {"weights", "d", "points", "D"});
    FayGrid g;
    g.weights = r.weights(r.require(*j, p, "weights"), p + "/weights", true);
    g.d = r.ints(r.require(*j, p, "d"), p + "/d", 1, 6);
    g.D = static_cast<int>(r.integer(r.require(*j, p, "D"), p + "/D", 1, 10));
    const json& pts = r.list(r.require(*j, p, "points"), p + "/points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string pp = p + "/points/" + std::to_string(i);
      auto tuple = r.rationals(pts[i], pp);
      if (!det && tuple.size() != 2) r.fail(pp, "expected a pair [a, b]");
      if (det) r.distinct_nonzero(tuple, pp);
      g.points.push_back(std::move(tuple));
    }
    (det ? cfg.fay_det : cfg.fay) = std::move(g);
  }
  if (const json* j = r.find(root, "mc"); j && selected.count("mc")) {
    const std::string p = "/mc";
    r.object(*j, p, {"d", "m", "sources", "regions", "s", "N"});
    McGrid g;
    g.d = r.ints(r.require(*j, p, "d"), p + "/d", 1, kMaxDimension);
    g.m = r.ints(r.require(*j, p, "m"), p + "/m", 1, kMaxDimension);
    g.sources = r.rationals(r.require(*j, p, "sources"), p + "/sources");
    r.distinct_nonzero(g.sources, p + "/sources");
    g.regions = r.regions(r.require(*j, p, "regions"), p + "/regions");
    g.s = r.rationals(r.require(*j, p, "s"), p + "/s");
    g.N = r.integer(r.require(*j, p, "N"), p + "/N", 1000, 100000000);
    cfg.mc = std::move(g);
  }
  if (const json* j = r.find(root, "structural"); j && selected.count("structural")) {
    const std::string p = "/structural";
    r.object(*j, p, {"schur_trials", "dodgson_trials", "dodgson_sizes", "gram_n", "gram_weights", "zhat_weights", "zhat_d",
                     "zhat_tuples", "zhat_max_weight"});
    StructuralGrid g;
    g.schur_trials = static_cast<int>(r.integer(r.require(*j, p, "schur_trials"), p + "/schur_trials", 1, 1000));
    g.dodgson_trials = static_cast<int>(r.integer(r.require(*j, p, "dodgson_trials"), p + "/dodgson_trials", 1, 1000));
    g.dodgson_sizes = r.ints(r.require(*j, p, "dodgson_sizes"), p + "/dodgson_sizes", 3, 8);
    g.gram_n = static_cast<int>(r.integer(r.require(*j, p, "gram_n"), p + "/gram_n", 1, 16));
    g.gram_weights = r.weights(r.require(*j, p, "gram_weights"), p + "/gram_weights", false);
    g.zhat_weights = r.weights(r.require(*j, p, "zhat_weights"), p + "/zhat_weights", true);
    g.zhat_d = r.ints(r.require(*j, p, "zhat_d"), p + "/zhat_d", 1, 4);
    g.zhat_tuples = static_cast<int>(r.integer(r.require(*j, p, "zhat_tuples"), p + "/zhat_tuples", 2, 100));
    g.zhat_max_weight = static_cast<int>(r.integer(r.require(*j, p, "zhat_max_weight"), p + "/zhat_max_weight", 4, 120));
    cfg.structural = std::move(g);
  }
  if (const json* j = r.find(root, "tolerances")) {
    const std::string p = "/tolerances";
    r.object(*j, p, {"identity_rel", "mc_z", "gram", "zhat_spread"});
    if (const json* v = r.find(*j, "identity_rel")) cfg.tol.identity_rel = r.real(*v, p + "/identity_rel");
    if (const json* v = r.find(*j, "mc_z")) cfg.tol.mc_z = r.real(*v, p + "/mc_z");
    if (const json* v = r.find(*j, "gram")) cfg.tol.gram = r.real(*v, p + "/gram");
    if (const json* v = r.find(*j, "zhat_spread")) cfg.tol.zhat_spread = r.real(*v, p + "/zhat_spread");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"quick", "full"};
  return names;
}

const std::string& preset_text(const std::string& name) {
  static const std::string quick = detail::kQuickPreset;
  static const std::string full = detail::kFullPreset;
  if (name == "quick") return quick;
  if (name == "full") return full;
  throw ConfigError("unknown preset '" + name + "' (expected quick or full)");
}

RunConfig preset(const std::string& name) { return parse_config(preset_text(name), "preset:" + name); }

}  // namespace rmxs::harness

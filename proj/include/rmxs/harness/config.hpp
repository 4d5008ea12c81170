#pragma once

// Run configuration: a JSON document with schema "rmxs-config/1". Every grid
// is validated against the preconditions of the module it feeds; errors carry
// the file position or the JSON pointer of the offending field.

#include "rmxs/intervals.hpp"
#include "rmxs/scalar.hpp"
#include "rmxs/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rmxs::harness {

inline constexpr const char* kSchema = "rmxs-config/1";

/// Suite names in run order.
const std::vector<std::string>& suite_names();

/// "gaussian", "laguerre" or "exp-poly:v0,v1,...,vk" (W = exp(-sum v_i x^i)).
Weight parse_weight(const std::string& name);

struct IdentityGrid {
  std::vector<std::string> weights;
  std::vector<int> d;
  std::vector<int> m;
  std::vector<Rational> sources;
  std::vector<IntervalSet> regions;
  std::vector<Rational> s;
  /// s values outside the proven range: reported, never counted.
  std::vector<Rational> exploratory_s;
};

struct ZRatioGrid {
  std::vector<std::string> weights;
  std::vector<int> d;
  std::vector<int> m;
  std::vector<Rational> sources;
  /// Deformations W(1 - s chi_E) checked in addition to the base weight.
  std::vector<IntervalSet> regions;
  std::vector<Rational> s;
  bool base = true;
};

struct LadderGrid {
  std::vector<std::string> weights;
  std::vector<int> d;
  int D = 6;
};

struct HirotaGrid {
  std::vector<std::string> weights;
  /// Every pair d_max >= d1 > d2 >= 0.
  int d_max = 3;
  int D = 4;
};

struct FayGrid {
  std::vector<std::string> weights;
  std::vector<int> d;
  /// Point tuples: pairs (a, b) for fay, lists a_1..a_m for fay-det.
  std::vector<std::vector<Rational>> points;
  int D = 5;
};

struct McGrid {
  std::vector<int> d;
  std::vector<int> m;
  std::vector<Rational> sources;
  std::vector<IntervalSet> regions;
  std::vector<Rational> s;
  long N = 100000;
};

struct StructuralGrid {
  int schur_trials = 10;
  int dodgson_trials = 5;
  std::vector<int> dodgson_sizes{3, 4, 5, 6};
  int gram_n = 12;
  std::vector<std::string> gram_weights;
  std::vector<std::string> zhat_weights;
  std::vector<int> zhat_d;
  int zhat_tuples = 3;
  int zhat_max_weight = 40;
};

struct Tolerances {
  double identity_rel = 1e-8;
  double mc_z = 3.0;
  double gram = 1e-10;
  double zhat_spread = 1e-8;
};

struct RunConfig {
  std::string name;
  std::uint64_t seed = 0;
  /// Expanded suite list (no "all"), in run order.
  std::vector<std::string> suites;
  std::optional<IdentityGrid> identity;
  std::optional<ZRatioGrid> z_ratio;
  std::optional<LadderGrid> ladder;
  std::optional<HirotaGrid> hirota;
  std::optional<FayGrid> fay;
  std::optional<FayGrid> fay_det;
  std::optional<McGrid> mc;
  std::optional<StructuralGrid> structural;
  Tolerances tol;

  bool runs(const std::string& suite) const;
};

/// Parses and validates; `origin` names the source in diagnostics. Throws
/// ConfigError.
RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

const std::vector<std::string>& preset_names();
/// The JSON text of a bundled preset ("quick" or "full").
const std::string& preset_text(const std::string& name);
RunConfig preset(const std::string& name);

}  // namespace rmxs::harness

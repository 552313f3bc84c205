#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scenelint {

/// What to do with category pairs whose co-occurrence fraction is above the
/// plausibility floor but below `cooccur_thresh`.
enum class WeakPairPolicy { fail, pass, exclude };

/// Every tunable threshold used by the verifiers. Defaults are the values the
/// evaluator was calibrated with.
struct EvalParams {
  double scale_hard_factor = 2.0;       // k
  double scale_soft_eps = 0.05;         // meters
  double plausibility_floor = 0.01;
  double cooccur_thresh = 0.2;
  double func_thresh = 0.7;
  double func_dist = 2.0;               // meters
  double weak_dist = 3.5;               // meters
  double soft_angle = 75.0;             // degrees
  double hard_angle = 150.0;            // degrees
  double overlap_tolerance = 0.2;       // meters
  double applicability_fraction = 0.5;
  double faces_pair_radius = 5.0;       // meters
  WeakPairPolicy weak_pair_policy = WeakPairPolicy::fail;
  std::array<double, 3> semantic_weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  /// Throws ValidationError naming the first violated constraint.
  void validate() const;
  friend bool operator==(const EvalParams&, const EvalParams&) = default;
};

/// Names of the scalar fields addressable by overlays and tuning grids.
const std::vector<std::string>& scalar_param_names();
bool is_scalar_param(std::string_view name);
double get_param(const EvalParams& params, std::string_view name);
/// Throws ValidationError for unknown names.
void set_param(EvalParams& params, std::string_view name, double value);

std::string_view to_string(WeakPairPolicy policy);
WeakPairPolicy weak_pair_policy_from_string(std::string_view text);

/// Merges a JSON overlay over `base` field by field; unknown keys are errors.
EvalParams apply_params_overlay(const EvalParams& base, std::string_view overlay_json);
EvalParams load_params_overlay(const std::filesystem::path& path, const EvalParams& base = {});
std::string serialize_params(const EvalParams& params);

}  // namespace scenelint

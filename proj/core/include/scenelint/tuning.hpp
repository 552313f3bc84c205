#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenelint/ontology.hpp"
#include "scenelint/params.hpp"
#include "scenelint/scene.hpp"
#include "scenelint/verifiers.hpp"

namespace scenelint {

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

/// Axes in priority order: the first axis defines the leniency groups used by
/// selection. `base` supplies every parameter not on an axis.
struct ParamGrid {
  std::vector<GridAxis> axes;
  EvalParams base;
};

/// {"base": {overlay}, "<param>": [values], ...} with axes in document order,
/// or {"base": ..., "axes": [{"name": ..., "values": [...]}, ...]}.
ParamGrid parse_grid(std::string_view json);
ParamGrid load_grid(const std::filesystem::path& path);

/// +1 when larger values relax the verifiers, -1 when smaller values do,
/// 0 when the parameter has no monotone effect.
int leniency_direction(std::string_view param);

struct Combo {
  std::vector<double> values;  // one per grid axis
  EvalParams params;
};

struct GridExpansion {
  std::vector<Combo> combos;     // cartesian order, last axis fastest
  std::vector<std::string> skipped;  // invalid combinations with the reason
};

/// Combinations must pass EvalParams::validate and keep soft_angle <
/// hard_angle and cooccur_thresh < func_thresh strictly.
GridExpansion expand_grid(const ParamGrid& grid);

struct ReferenceScene {
  std::string id;
  SceneLayout layout;
  std::optional<PlacementCondition> condition;
};

/// Every "*.layout.json" in `dir` (sorted), each paired with a sibling
/// "<stem>.condition.json" when present.
std::vector<ReferenceScene> load_reference_corpus(const std::filesystem::path& dir);

enum class TieRule {
  /// A combo is credited when it attains the scene's maximum over the grid.
  argmax,
  /// A combo is credited when the scene scores exactly 1.
  perfect,
};

/// avg, semantic, orient, overlap, prox_overlap, true_overlap, scale,
/// cooccur, complete.
double metric_value(const Scores& scores, std::string_view metric);
bool is_metric(std::string_view metric);

struct SweepOptions {
  TieRule tie_rule = TieRule::argmax;
  std::string metric = "avg";
  std::size_t jobs = 1;
};

struct ComboResult {
  Combo combo;
  std::int64_t count = 0;
  double mean_score = 0.0;
  std::size_t errors = 0;
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<ComboResult> combos;
  std::size_t scenes = 0;
  std::vector<std::string> skipped;
  /// "<scene>: combo <i>: <message>" per failed evaluation.
  std::vector<std::string> errors;
  /// Failed monotonicity sanity checks. Empty when every grid axis is
  /// monotone and the most lenient combo tops every scene, or when the check
  /// does not apply.
  std::vector<std::string> warnings;
  bool sanity_checked = false;
};

SweepResult sweep(std::span<const ReferenceScene> scenes, const Ontology& ontology, const ParamGrid& grid,
                  const SweepOptions& options = {});

/// Combo indices ordered from strictest to most lenient.
std::vector<std::size_t> leniency_order(const SweepResult& result);

struct SelectOptions {
  double band_lo = 0.30;
  double band_hi = 0.70;
};

struct Selection {
  std::size_t index = 0;  // into SweepResult::combos
  std::vector<std::size_t> in_band;
  /// True when no whole primary-axis group fitted the band and individual
  /// combos were used instead.
  bool per_combo = false;
};

/// Groups combos by their primary-axis value in leniency order; a group is in
/// band when its cumulative share lies inside [band_lo, band_hi]. Among in-band
/// combos: highest count, then hard_angle == 2 * soft_angle, then closest to
/// the band center, then lexicographic. Throws ValidationError when the band
/// holds no combo.
Selection select_combo(const SweepResult& result, const SelectOptions& options = {});

/// Chosen combo as an EvalParams overlay: {"<axis>": value, ...}.
std::string selection_overlay(const SweepResult& result, const Selection& selection);

/// Header: <axis...>,count,mean_score,errors.
std::string render_sweep_csv(const SweepResult& result);

}  // namespace scenelint

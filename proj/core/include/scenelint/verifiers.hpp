#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenelint/ontology.hpp"
#include "scenelint/params.hpp"
#include "scenelint/scene.hpp"

namespace scenelint {

/// Scale and orientation use pass/soft_fail/hard_fail; co-occurrence,
/// completeness and overlap use pass/fail.
enum class VerdictKind { pass, soft_fail, hard_fail, fail };

std::string_view to_string(VerdictKind kind);
VerdictKind verdict_kind_from_string(std::string_view text);

struct Verdict {
  VerdictKind kind = VerdictKind::pass;
  std::string detail;
  std::optional<double> measured;

  bool passed() const { return kind == VerdictKind::pass; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// ---- scale --------------------------------------------------------------

enum class ScaleAxis { width, height, depth };
std::string_view to_string(ScaleAxis axis);

struct AxisCheck {
  ScaleAxis axis = ScaleAxis::width;
  double value = 0.0;
  double hard_min = 0.0;
  double hard_max = 0.0;
  double soft_min = 0.0;
  double soft_max = 0.0;
  Verdict verdict;
  friend bool operator==(const AxisCheck&, const AxisCheck&) = default;
};

struct ObjectScaleResult {
  std::size_t object = 0;
  std::string label;
  bool checked = false;
  /// Footprint compared as (w vs height, h vs width).
  bool footprint_swapped = false;
  std::vector<AxisCheck> axes;
  double score = 1.0;
  std::string note;
  friend bool operator==(const ObjectScaleResult&, const ObjectScaleResult&) = default;
};

struct ScaleReport {
  std::vector<ObjectScaleResult> objects;
  std::size_t checked = 0;
  double passed = 0.0;
  double score = 1.0;
  friend bool operator==(const ScaleReport&, const ScaleReport&) = default;
};

/// Per-axis verdict against the [p5/k, p95*k] hard band and
/// [p5-eps, p95+eps] soft band.
AxisCheck check_scale_axis(ScaleAxis axis, double value, const DimStats& stats, const EvalParams& params);

/// 0 with any hard fail, 0.5 with soft fails only, 1 when every axis passes.
double scale_object_score(const std::vector<AxisCheck>& axes);

/// Vertical extent estimated from a reference mesh: d = m_d * (w/m_w + h/m_h) / 2.
double estimated_depth(double w, double h, const MeshRef& mesh);

ScaleReport verify_scale(const SceneLayout& layout, const Ontology& ontology, const EvalParams& params);

// ---- co-occurrence ------------------------------------------------------

enum class AssociationBand { implausible, weak, moderate, strong };
std::string_view to_string(AssociationBand band);

struct CooccurPairResult {
  std::string a;
  std::string b;
  double fraction = 0.0;
  std::optional<double> d_min;
  AssociationBand band = AssociationBand::implausible;
  /// False when excluded from the score by WeakPairPolicy::exclude.
  bool counted = true;
  Verdict verdict;
  friend bool operator==(const CooccurPairResult&, const CooccurPairResult&) = default;
};

struct CooccurReport {
  std::vector<CooccurPairResult> pairs;
  std::size_t checked = 0;
  std::size_t passed = 0;
  double score = 1.0;
  friend bool operator==(const CooccurReport&, const CooccurReport&) = default;
};

AssociationBand association_band(double fraction, const EvalParams& params);

/// Verdict for one category pair with co-occurrence fraction `fraction` and
/// minimum instance distance `d_min`. Sets `counted` to false for excluded
/// weak pairs.
VerdictKind cooccur_pair_verdict(double fraction, double d_min, const EvalParams& params, bool* counted = nullptr);

CooccurReport verify_cooccurrence(const SceneLayout& layout, const Ontology& ontology, const EvalParams& params);

// ---- completeness -------------------------------------------------------

struct CompletenessLine {
  std::string label;
  int expected = 0;
  int actual = 0;
  int matched = 0;
  int missing = 0;
  int extra = 0;
  friend bool operator==(const CompletenessLine&, const CompletenessLine&) = default;
};

struct CompletenessReport {
  std::vector<CompletenessLine> lines;  // sorted by label
  int matched = 0;
  int denominator = 0;
  double score = 1.0;
  friend bool operator==(const CompletenessReport&, const CompletenessReport&) = default;
};

CompletenessReport verify_completeness(const SceneLayout& layout, const PlacementCondition& condition);

double semantic_score(double s_scale, double s_cooccur, double s_complete, const EvalParams& params);
/// Without a placement condition: scale and co-occurrence reweighted to sum to 1.
double semantic_score(double s_scale, double s_cooccur, const EvalParams& params);

// ---- orientation --------------------------------------------------------

enum class OrientationCheckKind { back_to_wall, faces_center, faces_pair };
std::string_view to_string(OrientationCheckKind kind);

struct OrientationSubCheck {
  OrientationCheckKind kind = OrientationCheckKind::back_to_wall;
  /// Paired category (faces_pair) or empty.
  std::string target;
  double target_deg = 0.0;
  double delta_deg = 0.0;
  Verdict verdict;
  friend bool operator==(const OrientationSubCheck&, const OrientationSubCheck&) = default;
};

struct ObjectOrientationResult {
  std::size_t object = 0;
  std::string label;
  std::vector<OrientationSubCheck> subchecks;
  double score = 1.0;
  friend bool operator==(const ObjectOrientationResult&, const ObjectOrientationResult&) = default;
};

struct OrientationReport {
  /// Only objects with at least one applicable sub-check.
  std::vector<ObjectOrientationResult> objects;
  std::size_t checked = 0;
  double passed = 0.0;
  double score = 1.0;
  friend bool operator==(const OrientationReport&, const OrientationReport&) = default;
};

VerdictKind angle_verdict(double delta_deg, const EvalParams& params);

OrientationReport verify_orientation(const SceneLayout& layout, const Ontology& ontology, const EvalParams& params);

// ---- overlap ------------------------------------------------------------

struct OverlapPairResult {
  std::size_t i = 0;
  std::size_t j = 0;
  double aabb_overlap = 0.0;
  double obb_overlap = 0.0;
  Verdict aabb;
  Verdict obb;
  friend bool operator==(const OverlapPairResult&, const OverlapPairResult&) = default;
};

struct OverlapReport {
  std::vector<OverlapPairResult> pairs;
  std::size_t checked = 0;
  std::size_t aabb_passed = 0;
  std::size_t obb_passed = 0;
  double prox_score = 1.0;
  double true_score = 1.0;
  double overlap_score = 1.0;
  friend bool operator==(const OverlapReport&, const OverlapReport&) = default;
};

OverlapReport verify_overlap(const SceneLayout& layout, const EvalParams& params);

// ---- aggregate ----------------------------------------------------------

struct Scores {
  double scale = 1.0;
  double cooccur = 1.0;
  std::optional<double> complete;
  double semantic = 1.0;
  double orient = 1.0;
  double prox_overlap = 1.0;
  double true_overlap = 1.0;
  double overlap = 1.0;
  double avg = 1.0;
  friend bool operator==(const Scores&, const Scores&) = default;
};

/// (Sem + Ori + (ProxOvlp + TrueOvlp) / 2) / 3.
double average_score(double sem, double ori, double prox_overlap, double true_overlap);

struct SupportNote {
  std::size_t object = 0;
  std::string label;
  std::vector<std::pair<std::string, CountFraction>> surfaces;  // most frequent first
  friend bool operator==(const SupportNote&, const SupportNote&) = default;
};

struct AssessmentReport {
  Scores scores;
  ScaleReport scale;
  CooccurReport cooccurrence;
  std::optional<CompletenessReport> completeness;
  OrientationReport orientation;
  OverlapReport overlap;
  /// Informational only: support surfaces recorded for each placed category.
  std::vector<SupportNote> support;
  std::vector<std::string> object_labels;
  friend bool operator==(const AssessmentReport&, const AssessmentReport&) = default;
};

/// Runs every verifier. `condition` may be null, in which case completeness
/// is skipped and the semantic score reweights over scale and co-occurrence.
AssessmentReport evaluate(const SceneLayout& layout, const PlacementCondition* condition, const Ontology& ontology,
                          const EvalParams& params);

}  // namespace scenelint

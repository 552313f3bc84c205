#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenelint/ontology.hpp"
#include "scenelint/params.hpp"
#include "scenelint/report.hpp"
#include "scenelint/scene.hpp"
#include "scenelint/verifiers.hpp"

namespace scenelint {

enum class IssueKind { out_of_bounds, missing, extra, overlap };

std::string_view to_string(IssueKind kind);
IssueKind issue_kind_from_string(std::string_view text);

struct CriticNote {
  std::string label;
  IssueKind issue = IssueKind::out_of_bounds;
  /// Other object's label for overlap notes.
  std::string with;
  /// Measured excursion or penetration in meters.
  double amount_m = 0.0;
  std::string suggestion;
  std::optional<std::size_t> object_index;
  friend bool operator==(const CriticNote&, const CriticNote&) = default;
};

struct CriticFeedback {
  double reward = 1.0;
  std::vector<CriticNote> notes;
  std::vector<std::string> warnings;
  friend bool operator==(const CriticFeedback&, const CriticFeedback&) = default;
};

std::string feedback_to_json(const CriticFeedback& feedback);

class Critic {
 public:
  virtual ~Critic() = default;
  virtual CriticFeedback critique(const SceneLayout& layout, const PlacementCondition& condition) = 0;
};

class LayoutGenerator {
 public:
  virtual ~LayoutGenerator() = default;
  virtual SceneLayout initial(const PlacementCondition& condition) = 0;
  virtual SceneLayout revise(const SceneLayout& layout, const CriticFeedback& feedback,
                             const PlacementCondition& condition) = 0;
};

struct HeuristicTerms {
  double in_bounds = 1.0;
  double complete = 1.0;
  double non_overlap = 1.0;
};

/// Equal-weight mean of the in-bounds fraction (every OBB corner inside the
/// condition range), completeness, and OBB non-overlap.
HeuristicTerms heuristic_terms(const SceneLayout& layout, const PlacementCondition& condition,
                               const EvalParams& params);
CriticFeedback heuristic_critic(const SceneLayout& layout, const PlacementCondition& condition,
                                const EvalParams& params);

class HeuristicCritic final : public Critic {
 public:
  explicit HeuristicCritic(EvalParams params = {}) : params_(params) {}
  CriticFeedback critique(const SceneLayout& layout, const PlacementCondition& condition) override;

 private:
  EvalParams params_;
};

/// Deterministic generator that applies every critic suggestion: removes
/// extras, adds missing objects, and moves out-of-bounds or overlapping
/// objects to the first free in-range spot on a scan grid.
class ScriptedFixer final : public LayoutGenerator {
 public:
  struct Options {
    std::string room_type;
    /// Scan spacing for free-spot search, meters.
    double grid_step = 0.05;
    /// Footprint used for a missing object without ontology dimensions.
    double default_size = 0.5;
    /// Starting layout; when unset, objects are laid in one row from the
    /// range's lower-left corner.
    std::optional<SceneLayout> initial;
  };

  ScriptedFixer(const Ontology& ontology, Options options);

  SceneLayout initial(const PlacementCondition& condition) override;
  SceneLayout revise(const SceneLayout& layout, const CriticFeedback& feedback,
                     const PlacementCondition& condition) override;

 private:
  std::pair<double, double> footprint_for(const std::string& label) const;

  const Ontology& ontology_;
  Options options_;
};

struct TrajectoryStep {
  std::size_t step = 0;
  SceneLayout layout;
  std::optional<CriticFeedback> feedback;
  std::optional<AssessmentReport> report;
  bool failed = false;
  std::string error;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
};

struct RefineOptions {
  /// Number of revisions after the initial layout.
  std::size_t max_iters = 5;
  double stop_reward = 1.0;
};

/// Step 0 scores the generator's initial layout. Each later step revises the
/// previous layout from its feedback, then evaluates and critiques the
/// result. Stops once a step's reward reaches `stop_reward`, after
/// `max_iters` revisions, or at the first failing step.
Trajectory refine_loop(LayoutGenerator& generator, Critic& critic, const PlacementCondition& condition,
                       const Ontology& ontology, const EvalParams& params, const RefineOptions& options = {});

/// One JSON object per step: {step, layout, feedback, report, failed, error}.
std::string trajectory_to_jsonl(const Trajectory& trajectory);

/// Rows keyed by step index, with the critic reward when present.
std::vector<ScoreRow> trajectory_rows(const Trajectory& trajectory);

}  // namespace scenelint

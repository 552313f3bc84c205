#include "scenelint/refine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "format.hpp"
#include "json_util.hpp"
#include "report_json.hpp"
#include "scene_json.hpp"
#include "scenelint/errors.hpp"

namespace scenelint {

using detail::Json;

namespace {

constexpr double kSlack = 1e-9;

double out_of_range(const ObjectInstance& o, const Rect& r) {
  double worst = 0.0;
  for (const Vec2& c : obb_corners(o.obb())) {
    worst = std::max({worst, r.x_min - c.x, c.x - r.x_max, r.y_min - c.y, c.y - r.y_max});
  }
  return worst;
}

bool inside(const ObjectInstance& o, const Rect& r) { return out_of_range(o, r) <= kSlack; }

}  // namespace

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::out_of_bounds: return "out_of_bounds";
    case IssueKind::missing: return "missing";
    case IssueKind::extra: return "extra";
    case IssueKind::overlap: return "overlap";
  }
  return "out_of_bounds";
}

IssueKind issue_kind_from_string(std::string_view text) {
  for (auto k : {IssueKind::out_of_bounds, IssueKind::missing, IssueKind::extra, IssueKind::overlap}) {
    if (to_string(k) == text) return k;
  }
  throw ParseError("unknown issue kind '" + std::string(text) + "'");
}

namespace detail {

Json feedback_to_json_value(const CriticFeedback& f) {
  Json notes = Json::array();
  for (const CriticNote& n : f.notes) {
    Json j = Json::object();
    j["label"] = n.label;
    j["issue"] = std::string(to_string(n.issue));
    if (n.issue == IssueKind::overlap) j["with"] = n.with;
    j["amount_m"] = n.amount_m;
    j["suggestion"] = n.suggestion;
    j["object_index"] = n.object_index ? Json(*n.object_index) : Json(nullptr);
    notes.push_back(std::move(j));
  }
  return Json{{"reward", f.reward}, {"notes", std::move(notes)}, {"warnings", f.warnings}};
}

}  // namespace detail

std::string feedback_to_json(const CriticFeedback& feedback) {
  return detail::dump(detail::feedback_to_json_value(feedback));
}

// ---- heuristic critic ---------------------------------------------------

HeuristicTerms heuristic_terms(const SceneLayout& layout, const PlacementCondition& condition,
                               const EvalParams& params) {
  HeuristicTerms t;
  if (!layout.objects.empty()) {
    std::size_t in = 0;
    for (const ObjectInstance& o : layout.objects) in += inside(o, condition.range) ? 1 : 0;
    t.in_bounds = static_cast<double>(in) / static_cast<double>(layout.objects.size());
  }
  t.complete = verify_completeness(layout, condition).score;
  t.non_overlap = verify_overlap(layout, params).true_score;
  return t;
}

CriticFeedback heuristic_critic(const SceneLayout& layout, const PlacementCondition& condition,
                                const EvalParams& params) {
  const HeuristicTerms t = heuristic_terms(layout, condition, params);
  CriticFeedback f;
  f.reward = (t.in_bounds + t.complete + t.non_overlap) / 3.0;
  const Rect& r = condition.range;
  char range_text[128];
  std::snprintf(range_text, sizeof range_text, "[%s, %s] x [%s, %s]", detail::fixed(r.x_min).c_str(),
                detail::fixed(r.x_max).c_str(), detail::fixed(r.y_min).c_str(), detail::fixed(r.y_max).c_str());

  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const ObjectInstance& o = layout.objects[i];
    const double excursion = out_of_range(o, r);
    if (excursion > kSlack) {
      f.notes.push_back({o.label, IssueKind::out_of_bounds, "", excursion,
                         "move " + o.label + " " + detail::fixed(excursion) + " m inward to lie within " + range_text,
                         i});
    }
  }

  const CompletenessReport comp = verify_completeness(layout, condition);
  for (const CompletenessLine& l : comp.lines) {
    for (int k = 0; k < l.missing; ++k) {
      f.notes.push_back({l.label, IssueKind::missing, "", 0.0,
                         "add " + l.label + " (" + std::to_string(l.actual) + " of " + std::to_string(l.expected) +
                             " placed)",
                         std::nullopt});
    }
    if (l.extra > 0) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < layout.objects.size(); ++i) {
        if (canonical_label(layout.objects[i].label) == l.label) idx.push_back(i);
      }
      for (std::size_t k = idx.size() - static_cast<std::size_t>(l.extra); k < idx.size(); ++k) {
        f.notes.push_back({layout.objects[idx[k]].label, IssueKind::extra, "", 0.0,
                           "remove " + layout.objects[idx[k]].label + " (" + std::to_string(l.actual) + " placed, " +
                               std::to_string(l.expected) + " required)",
                           idx[k]});
      }
    }
  }

  for (const OverlapPairResult& p : verify_overlap(layout, params).pairs) {
    if (p.obb.passed()) continue;
    const ObjectInstance& a = layout.objects[p.i];
    const ObjectInstance& b = layout.objects[p.j];
    f.notes.push_back({b.label, IssueKind::overlap, a.label, p.obb_overlap,
                       "move " + b.label + " clear of " + a.label + " (penetration " + detail::fixed(p.obb_overlap) +
                           " m)",
                       p.j});
  }
  return f;
}

CriticFeedback HeuristicCritic::critique(const SceneLayout& layout, const PlacementCondition& condition) {
  return heuristic_critic(layout, condition, params_);
}

// ---- scripted generator -------------------------------------------------

ScriptedFixer::ScriptedFixer(const Ontology& ontology, Options options)
    : ontology_(ontology), options_(std::move(options)) {
  if (!(options_.grid_step > 0.0)) throw ValidationError("grid_step", "must be > 0");
  if (!(options_.default_size > 0.0)) throw ValidationError("default_size", "must be > 0");
}

std::pair<double, double> ScriptedFixer::footprint_for(const std::string& label) const {
  double w = options_.default_size;
  double h = options_.default_size;
  if (const CategoryEntry* e = ontology_.find(label)) {
    if (e->dimension.width && e->dimension.width->median > 0.0) w = e->dimension.width->median;
    if (e->dimension.height && e->dimension.height->median > 0.0) h = e->dimension.height->median;
  }
  return {w, h};
}

SceneLayout ScriptedFixer::initial(const PlacementCondition& condition) {
  if (options_.initial) return *options_.initial;
  SceneLayout layout;
  layout.description = condition.description;
  layout.room_type = options_.room_type;
  layout.range = condition.range;
  double cursor = condition.range.x_min;
  for (const RequiredObject& r : condition.required_objects) {
    const auto [w, h] = footprint_for(r.label);
    for (int k = 0; k < r.count; ++k) {
      layout.objects.push_back({r.label, cursor + w / 2.0, condition.range.y_min + h / 2.0, w, h, 0.0, std::nullopt});
      cursor += w;
    }
  }
  return layout;
}

namespace {

bool clear_of(const ObjectInstance& o, const std::vector<ObjectInstance>& settled) {
  const Obb box = o.obb();
  const Aabb hull = aabb_of(box);
  for (const ObjectInstance& s : settled) {
    const Obb other = s.obb();
    if (sat_penetration(box, other) > kSlack) return false;
    if (aabb_overlap_amount(hull, aabb_of(other)) > kSlack) return false;
  }
  return true;
}

bool place_free(ObjectInstance& o, const std::vector<ObjectInstance>& settled, const Rect& r, double step) {
  ObjectInstance probe = o;
  probe.cx = 0.0;
  probe.cy = 0.0;
  const Aabb hull = aabb_of(probe.obb());
  const double hx = hull.x_plus;
  const double hy = hull.y_plus;
  const auto nx = static_cast<long>(std::floor((r.x_max - r.x_min - 2.0 * hx) / step + kSlack));
  const auto ny = static_cast<long>(std::floor((r.y_max - r.y_min - 2.0 * hy) / step + kSlack));
  for (long iy = 0; iy <= ny; ++iy) {
    for (long ix = 0; ix <= nx; ++ix) {
      probe.cx = r.x_min + hx + static_cast<double>(ix) * step;
      probe.cy = r.y_min + hy + static_cast<double>(iy) * step;
      if (inside(probe, r) && clear_of(probe, settled)) {
        o.cx = probe.cx;
        o.cy = probe.cy;
        return true;
      }
    }
  }
  return false;
}

std::optional<std::size_t> index_for(const CriticNote& n, const SceneLayout& layout,
                                     const std::set<std::size_t>& taken = {}) {
  if (n.object_index && *n.object_index < layout.objects.size() && !taken.contains(*n.object_index) &&
      canonical_label(layout.objects[*n.object_index].label) == canonical_label(n.label)) {
    return n.object_index;
  }
  for (std::size_t i = layout.objects.size(); i-- > 0;) {
    if (!taken.contains(i) && canonical_label(layout.objects[i].label) == canonical_label(n.label)) return i;
  }
  return std::nullopt;
}

}  // namespace

SceneLayout ScriptedFixer::revise(const SceneLayout& layout, const CriticFeedback& feedback,
                                  const PlacementCondition& condition) {
  std::set<std::size_t> remove;
  std::set<std::size_t> move;
  std::vector<std::string> add;
  for (const CriticNote& n : feedback.notes) {
    switch (n.issue) {
      case IssueKind::missing:
        add.push_back(n.label);
        break;
      case IssueKind::extra:
        if (auto i = index_for(n, layout, remove)) remove.insert(*i);
        break;
      case IssueKind::out_of_bounds:
      case IssueKind::overlap:
        if (auto i = index_for(n, layout)) move.insert(*i);
        break;
    }
  }

  SceneLayout out = layout;
  out.objects.clear();
  std::vector<ObjectInstance> settled;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    if (remove.contains(i)) continue;
    if (move.contains(i)) {
      pending.push_back(i);
    } else {
      settled.push_back(layout.objects[i]);
    }
  }
  std::vector<ObjectInstance> moved;
  for (std::size_t i : pending) {
    ObjectInstance o = layout.objects[i];
    std::vector<ObjectInstance> others = settled;
    others.insert(others.end(), moved.begin(), moved.end());
    place_free(o, others, condition.range, options_.grid_step);
    moved.push_back(o);
  }
  // Preserve original order for retained objects.
  std::size_t mi = 0;
  std::size_t si = 0;
  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    if (remove.contains(i)) continue;
    out.objects.push_back(move.contains(i) ? moved[mi++] : settled[si++]);
  }
  for (const std::string& label : add) {
    const auto [w, h] = footprint_for(label);
    ObjectInstance o{label, condition.range.center().x, condition.range.center().y, w, h, 0.0, std::nullopt};
    place_free(o, out.objects, condition.range, options_.grid_step);
    out.objects.push_back(std::move(o));
  }
  return out;
}

// ---- loop ---------------------------------------------------------------

namespace {

bool score_step(TrajectoryStep& step, Critic& critic, const PlacementCondition& condition, const Ontology& ontology,
                const EvalParams& params) {
  try {
    step.report = evaluate(step.layout, &condition, ontology, params);
  } catch (const std::exception& e) {
    step.failed = true;
    step.error = std::string("evaluation failed: ") + e.what();
    return false;
  }
  try {
    step.feedback = critic.critique(step.layout, condition);
  } catch (const std::exception& e) {
    step.failed = true;
    step.error = std::string("critic failed: ") + e.what();
    return false;
  }
  return true;
}

}  // namespace

Trajectory refine_loop(LayoutGenerator& generator, Critic& critic, const PlacementCondition& condition,
                       const Ontology& ontology, const EvalParams& params, const RefineOptions& options) {
  if (options.max_iters < 1) throw ValidationError("max_iters", "must be >= 1");
  Trajectory t;
  TrajectoryStep first;
  try {
    first.layout = generator.initial(condition);
  } catch (const std::exception& e) {
    first.failed = true;
    first.error = std::string("generator failed: ") + e.what();
    t.steps.push_back(std::move(first));
    return t;
  }
  if (!score_step(first, critic, condition, ontology, params)) {
    t.steps.push_back(std::move(first));
    return t;
  }
  t.steps.push_back(std::move(first));

  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    const TrajectoryStep& prev = t.steps.back();
    if (prev.feedback->reward >= options.stop_reward) break;
    TrajectoryStep step;
    step.step = it;
    try {
      step.layout = generator.revise(prev.layout, *prev.feedback, condition);
    } catch (const std::exception& e) {
      step.layout = prev.layout;
      step.failed = true;
      step.error = std::string("generator failed: ") + e.what();
      try {
        step.report = evaluate(step.layout, &condition, ontology, params);
      } catch (const std::exception&) {
      }
      t.steps.push_back(std::move(step));
      break;
    }
    const bool ok = score_step(step, critic, condition, ontology, params);
    t.steps.push_back(std::move(step));
    if (!ok) break;
  }
  return t;
}

std::string trajectory_to_jsonl(const Trajectory& trajectory) {
  std::string out;
  for (const TrajectoryStep& s : trajectory.steps) {
    Json j = Json::object();
    j["step"] = s.step;
    j["layout"] = detail::layout_to_json(s.layout);
    j["feedback"] = s.feedback ? detail::feedback_to_json_value(*s.feedback) : Json(nullptr);
    j["report"] = s.report ? detail::report_to_json_value(*s.report) : Json(nullptr);
    j["failed"] = s.failed;
    j["error"] = s.error;
    out += j.dump(-1, ' ', false, Json::error_handler_t::replace);
    out += "\n";
  }
  return out;
}

std::vector<ScoreRow> trajectory_rows(const Trajectory& trajectory) {
  std::vector<ScoreRow> rows;
  for (const TrajectoryStep& s : trajectory.steps) {
    if (!s.report) continue;
    ScoreRow r{std::to_string(s.step), s.report->scores, std::nullopt};
    if (s.feedback) r.reward = s.feedback->reward;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace scenelint

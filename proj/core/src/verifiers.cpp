#include "scenelint/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "format.hpp"
#include "scenelint/errors.hpp"

namespace scenelint {

using detail::fixed;

namespace {

double ratio_or_one(double passed, std::size_t checked) {
  return checked == 0 ? 1.0 : passed / static_cast<double>(checked);
}

std::string meters(double v) { return fixed(v) + " m"; }
std::string degrees(double v) { return fixed(v, 1) + "°"; }

}  // namespace

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::pass: return "pass";
    case VerdictKind::soft_fail: return "soft_fail";
    case VerdictKind::hard_fail: return "hard_fail";
    case VerdictKind::fail: return "fail";
  }
  return "fail";
}

VerdictKind verdict_kind_from_string(std::string_view text) {
  if (text == "pass") return VerdictKind::pass;
  if (text == "soft_fail") return VerdictKind::soft_fail;
  if (text == "hard_fail") return VerdictKind::hard_fail;
  if (text == "fail") return VerdictKind::fail;
  throw ParseError("unknown verdict kind '" + std::string(text) + "'");
}

std::string_view to_string(ScaleAxis axis) {
  switch (axis) {
    case ScaleAxis::width: return "width";
    case ScaleAxis::height: return "height";
    case ScaleAxis::depth: return "depth";
  }
  return "width";
}

std::string_view to_string(AssociationBand band) {
  switch (band) {
    case AssociationBand::implausible: return "implausible";
    case AssociationBand::weak: return "weak";
    case AssociationBand::moderate: return "moderate";
    case AssociationBand::strong: return "strong";
  }
  return "implausible";
}

std::string_view to_string(OrientationCheckKind kind) {
  switch (kind) {
    case OrientationCheckKind::back_to_wall: return "back_to_wall";
    case OrientationCheckKind::faces_center: return "faces_center";
    case OrientationCheckKind::faces_pair: return "faces_pair";
  }
  return "back_to_wall";
}

// ---- scale --------------------------------------------------------------

AxisCheck check_scale_axis(ScaleAxis axis, double value, const DimStats& stats, const EvalParams& params) {
  AxisCheck c;
  c.axis = axis;
  c.value = value;
  c.hard_min = stats.p5 / params.scale_hard_factor;
  c.hard_max = stats.p95 * params.scale_hard_factor;
  c.soft_min = stats.p5 - params.scale_soft_eps;
  c.soft_max = stats.p95 + params.scale_soft_eps;
  c.verdict.measured = value;
  if (value < c.hard_min) {
    c.verdict.kind = VerdictKind::hard_fail;
    c.verdict.detail = meters(value) + " < hard min " + meters(c.hard_min);
  } else if (value > c.hard_max) {
    c.verdict.kind = VerdictKind::hard_fail;
    c.verdict.detail = meters(value) + " > hard max " + meters(c.hard_max);
  } else if (value < c.soft_min) {
    c.verdict.kind = VerdictKind::soft_fail;
    c.verdict.detail = meters(value) + " < soft min " + meters(c.soft_min);
  } else if (value > c.soft_max) {
    c.verdict.kind = VerdictKind::soft_fail;
    c.verdict.detail = meters(value) + " > soft max " + meters(c.soft_max);
  } else {
    c.verdict.kind = VerdictKind::pass;
    c.verdict.detail = meters(value) + " within [" + fixed(stats.p5) + ", " + fixed(stats.p95) + "] m";
  }
  return c;
}

double scale_object_score(const std::vector<AxisCheck>& axes) {
  bool soft = false;
  for (const AxisCheck& a : axes) {
    if (a.verdict.kind == VerdictKind::hard_fail) return 0.0;
    if (a.verdict.kind == VerdictKind::soft_fail) soft = true;
  }
  return soft ? 0.5 : 1.0;
}

double estimated_depth(double w, double h, const MeshRef& mesh) {
  const double sx = w / mesh.w;
  const double sy = h / mesh.h;
  const double sz = (sx + sy) / 2.0;
  return mesh.d * sz;
}

ScaleReport verify_scale(const SceneLayout& layout, const Ontology& ontology, const EvalParams& params) {
  ScaleReport report;
  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const ObjectInstance& o = layout.objects[i];
    ObjectScaleResult result;
    result.object = i;
    result.label = canonical_label(o.label);
    const CategoryEntry* entry = ontology.find(result.label);
    if (entry == nullptr) {
      result.note = "no ontology data for category";
      report.objects.push_back(std::move(result));
      continue;
    }
    const DimensionBlock& dim = entry->dimension;

    auto footprint = [&](bool swapped) {
      std::vector<AxisCheck> axes;
      const std::optional<DimStats>& for_w = swapped ? dim.height : dim.width;
      const std::optional<DimStats>& for_h = swapped ? dim.width : dim.height;
      if (for_w) axes.push_back(check_scale_axis(swapped ? ScaleAxis::height : ScaleAxis::width, o.w, *for_w, params));
      if (for_h) axes.push_back(check_scale_axis(swapped ? ScaleAxis::width : ScaleAxis::height, o.h, *for_h, params));
      return axes;
    };
    std::vector<AxisCheck> direct = footprint(false);
    std::vector<AxisCheck> swapped = footprint(true);
    std::vector<AxisCheck> depth;
    std::string note;
    if (o.mesh_ref && dim.depth) {
      depth.push_back(check_scale_axis(ScaleAxis::depth, estimated_depth(o.w, o.h, *o.mesh_ref), *dim.depth, params));
    } else if (dim.depth) {
      note = "depth skipped: no mesh reference";
    } else {
      note = "depth skipped: no depth statistics";
    }
    for (auto* axes : {&direct, &swapped}) axes->insert(axes->end(), depth.begin(), depth.end());

    const double direct_score = scale_object_score(direct);
    const double swapped_score = scale_object_score(swapped);
    const bool use_swapped = !swapped.empty() && swapped_score > direct_score;
    result.footprint_swapped = use_swapped;
    result.axes = use_swapped ? std::move(swapped) : std::move(direct);
    result.note = std::move(note);
    if (result.axes.empty()) {
      result.note = "no dimension statistics for category";
      report.objects.push_back(std::move(result));
      continue;
    }
    result.checked = true;
    result.score = use_swapped ? swapped_score : direct_score;
    report.checked += 1;
    report.passed += result.score;
    report.objects.push_back(std::move(result));
  }
  report.score = ratio_or_one(report.passed, report.checked);
  return report;
}

// ---- co-occurrence ------------------------------------------------------

AssociationBand association_band(double fraction, const EvalParams& params) {
  if (!(fraction > params.plausibility_floor)) return AssociationBand::implausible;
  if (fraction >= params.func_thresh) return AssociationBand::strong;
  if (fraction >= params.cooccur_thresh) return AssociationBand::moderate;
  return AssociationBand::weak;
}

VerdictKind cooccur_pair_verdict(double fraction, double d_min, const EvalParams& params, bool* counted) {
  if (counted) *counted = true;
  switch (association_band(fraction, params)) {
    case AssociationBand::implausible:
      return VerdictKind::fail;
    case AssociationBand::strong:
      return d_min <= params.func_dist ? VerdictKind::pass : VerdictKind::fail;
    case AssociationBand::moderate:
      return d_min <= params.weak_dist ? VerdictKind::pass : VerdictKind::fail;
    case AssociationBand::weak:
      switch (params.weak_pair_policy) {
        case WeakPairPolicy::fail: return VerdictKind::fail;
        case WeakPairPolicy::pass: return VerdictKind::pass;
        case WeakPairPolicy::exclude:
          if (counted) *counted = false;
          return VerdictKind::fail;
      }
  }
  return VerdictKind::fail;
}

CooccurReport verify_cooccurrence(const SceneLayout& layout, const Ontology& ontology, const EvalParams& params) {
  CooccurReport report;
  std::map<std::string, std::vector<Vec2>> by_label;
  for (const ObjectInstance& o : layout.objects) by_label[canonical_label(o.label)].push_back(o.center());
  std::optional<std::string_view> room;
  if (!layout.room_type.empty()) room = layout.room_type;

  for (auto a = by_label.begin(); a != by_label.end(); ++a) {
    for (auto b = std::next(a); b != by_label.end(); ++b) {
      CooccurPairResult pair;
      pair.a = a->first;
      pair.b = b->first;
      pair.fraction = cooccur_fraction(ontology, pair.a, pair.b, room);
      pair.band = association_band(pair.fraction, params);
      double d_min = std::numeric_limits<double>::infinity();
      if (pair.band != AssociationBand::implausible) {
        for (Vec2 pa : a->second) {
          for (Vec2 pb : b->second) d_min = std::min(d_min, distance(pa, pb));
        }
        pair.d_min = d_min;
      }
      pair.verdict.kind = cooccur_pair_verdict(pair.fraction, d_min, params, &pair.counted);
      pair.verdict.measured = pair.d_min;
      const std::string f = "f=" + fixed(pair.fraction);
      switch (pair.band) {
        case AssociationBand::implausible:
          pair.verdict.detail = f + " <= plausibility floor " + fixed(params.plausibility_floor);
          break;
        case AssociationBand::strong:
          pair.verdict.detail = f + " (strong), d_min " + meters(d_min) + (d_min <= params.func_dist ? " <= " : " > ") +
                                meters(params.func_dist);
          break;
        case AssociationBand::moderate:
          pair.verdict.detail = f + " (moderate), d_min " + meters(d_min) +
                                (d_min <= params.weak_dist ? " <= " : " > ") + meters(params.weak_dist);
          break;
        case AssociationBand::weak:
          pair.verdict.detail = f + " (weak) < cooccur_thresh " + fixed(params.cooccur_thresh) + ", policy " +
                                std::string(to_string(params.weak_pair_policy));
          break;
      }
      if (pair.counted) {
        report.checked += 1;
        if (pair.verdict.passed()) report.passed += 1;
      }
      report.pairs.push_back(std::move(pair));
    }
  }
  report.score = ratio_or_one(static_cast<double>(report.passed), report.checked);
  return report;
}

// ---- completeness -------------------------------------------------------

CompletenessReport verify_completeness(const SceneLayout& layout, const PlacementCondition& condition) {
  std::map<std::string, std::pair<int, int>> counts;  // label -> (expected, actual)
  for (const RequiredObject& r : condition.required_objects) counts[canonical_label(r.label)].first += r.count;
  for (const ObjectInstance& o : layout.objects) counts[canonical_label(o.label)].second += 1;

  CompletenessReport report;
  for (const auto& [label, ea] : counts) {
    CompletenessLine line;
    line.label = label;
    line.expected = ea.first;
    line.actual = ea.second;
    line.matched = std::min(line.actual, line.expected);
    line.missing = std::max(0, line.expected - line.actual);
    line.extra = std::max(0, line.actual - line.expected);
    report.matched += line.matched;
    report.denominator += line.expected + line.extra;
    report.lines.push_back(std::move(line));
  }
  report.score = report.denominator == 0 ? 1.0 : static_cast<double>(report.matched) / report.denominator;
  return report;
}

double semantic_score(double s_scale, double s_cooccur, double s_complete, const EvalParams& params) {
  const auto& w = params.semantic_weights;
  return w[0] * s_scale + w[1] * s_cooccur + w[2] * s_complete;
}

double semantic_score(double s_scale, double s_cooccur, const EvalParams& params) {
  const double total = params.semantic_weights[0] + params.semantic_weights[1];
  if (!(total > 0.0)) return (s_scale + s_cooccur) / 2.0;
  return (params.semantic_weights[0] * s_scale + params.semantic_weights[1] * s_cooccur) / total;
}

// ---- orientation --------------------------------------------------------

VerdictKind angle_verdict(double delta_deg, const EvalParams& params) {
  if (delta_deg <= params.soft_angle) return VerdictKind::pass;
  if (delta_deg <= params.hard_angle) return VerdictKind::soft_fail;
  return VerdictKind::hard_fail;
}

OrientationReport verify_orientation(const SceneLayout& layout, const Ontology& ontology, const EvalParams& params) {
  OrientationReport report;
  const std::vector<Vec2> walls = layout.walls();
  const Vec2 centroid = layout.room_centroid();
  std::vector<std::string> labels;
  labels.reserve(layout.objects.size());
  for (const ObjectInstance& o : layout.objects) labels.push_back(canonical_label(o.label));

  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const ObjectInstance& o = layout.objects[i];
    const OrientationChecks checks = orientation_checks_for(ontology, labels[i], params);
    if (checks.empty()) continue;
    ObjectOrientationResult result;
    result.object = i;
    result.label = labels[i];

    auto add = [&](OrientationCheckKind kind, double target_deg, std::string target, std::string what) {
      OrientationSubCheck sc;
      sc.kind = kind;
      sc.target = std::move(target);
      sc.target_deg = target_deg;
      sc.delta_deg = angle_delta(o.yaw_deg, target_deg);
      sc.verdict.kind = angle_verdict(sc.delta_deg, params);
      sc.verdict.measured = sc.delta_deg;
      const char* cmp = sc.verdict.kind == VerdictKind::pass        ? " <= "
                        : sc.verdict.kind == VerdictKind::soft_fail ? " > "
                                                                    : " > ";
      const double bound = sc.verdict.kind == VerdictKind::hard_fail ? params.hard_angle : params.soft_angle;
      sc.verdict.detail = "yaw " + degrees(o.yaw_deg) + " vs " + what + " " + degrees(target_deg) + ", delta " +
                          degrees(sc.delta_deg) + cmp + degrees(bound);
      result.subchecks.push_back(std::move(sc));
    };

    if (checks.back_to_wall) {
      const WallHit wall = nearest_wall(o.center(), walls);
      add(OrientationCheckKind::back_to_wall, wall.inward_normal_deg, "", "wall normal");
    }
    if (checks.faces_center && !(o.center() == centroid)) {
      add(OrientationCheckKind::faces_center, direction_to(o.center(), centroid), "", "centroid direction");
    }
    if (!checks.faces_pair.empty()) {
      std::optional<std::size_t> nearest;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < layout.objects.size(); ++j) {
        if (j == i) continue;
        if (!std::binary_search(checks.faces_pair.begin(), checks.faces_pair.end(), labels[j])) continue;
        const double d = distance(o.center(), layout.objects[j].center());
        if (d == 0.0 || d > params.faces_pair_radius) continue;
        if (d < best) {
          best = d;
          nearest = j;
        }
      }
      if (nearest) {
        add(OrientationCheckKind::faces_pair, direction_to(o.center(), layout.objects[*nearest].center()),
            labels[*nearest], labels[*nearest] + " direction");
      }
    }
    if (result.subchecks.empty()) continue;

    bool any_pass = false;
    bool any_soft = false;
    for (const auto& sc : result.subchecks) {
      any_pass = any_pass || sc.verdict.kind == VerdictKind::pass;
      any_soft = any_soft || sc.verdict.kind == VerdictKind::soft_fail;
    }
    result.score = any_pass ? 1.0 : (any_soft ? 0.5 : 0.0);
    report.checked += 1;
    report.passed += result.score;
    report.objects.push_back(std::move(result));
  }
  report.score = ratio_or_one(report.passed, report.checked);
  return report;
}

// ---- overlap ------------------------------------------------------------

OverlapReport verify_overlap(const SceneLayout& layout, const EvalParams& params) {
  OverlapReport report;
  const std::size_t n = layout.objects.size();
  std::vector<Obb> boxes;
  std::vector<Aabb> hulls;
  boxes.reserve(n);
  hulls.reserve(n);
  for (const ObjectInstance& o : layout.objects) {
    boxes.push_back(o.obb());
    hulls.push_back(aabb_of(boxes.back()));
  }
  auto verdict = [&](double amount) {
    Verdict v;
    v.measured = amount;
    if (amount > params.overlap_tolerance) {
      v.kind = VerdictKind::fail;
      v.detail = meters(amount) + " > tolerance " + meters(params.overlap_tolerance);
    } else {
      v.kind = VerdictKind::pass;
      v.detail = meters(amount) + " <= tolerance " + meters(params.overlap_tolerance);
    }
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      OverlapPairResult pair;
      pair.i = i;
      pair.j = j;
      pair.aabb_overlap = aabb_overlap_amount(hulls[i], hulls[j]);
      pair.obb_overlap = sat_penetration(boxes[i], boxes[j]);
      pair.aabb = verdict(pair.aabb_overlap);
      pair.obb = verdict(pair.obb_overlap);
      report.checked += 1;
      if (pair.aabb.passed()) report.aabb_passed += 1;
      if (pair.obb.passed()) report.obb_passed += 1;
      report.pairs.push_back(std::move(pair));
    }
  }
  report.prox_score = ratio_or_one(static_cast<double>(report.aabb_passed), report.checked);
  report.true_score = ratio_or_one(static_cast<double>(report.obb_passed), report.checked);
  report.overlap_score = (report.prox_score + report.true_score) / 2.0;
  return report;
}

// ---- aggregate ----------------------------------------------------------

double average_score(double sem, double ori, double prox_overlap, double true_overlap) {
  return (sem + ori + (prox_overlap + true_overlap) / 2.0) / 3.0;
}

AssessmentReport evaluate(const SceneLayout& layout, const PlacementCondition* condition, const Ontology& ontology,
                          const EvalParams& params) {
  AssessmentReport report;
  for (const ObjectInstance& o : layout.objects) report.object_labels.push_back(canonical_label(o.label));
  report.scale = verify_scale(layout, ontology, params);
  report.cooccurrence = verify_cooccurrence(layout, ontology, params);
  if (condition != nullptr) report.completeness = verify_completeness(layout, *condition);
  report.orientation = verify_orientation(layout, ontology, params);
  report.overlap = verify_overlap(layout, params);

  Scores& s = report.scores;
  s.scale = report.scale.score;
  s.cooccur = report.cooccurrence.score;
  if (report.completeness) {
    s.complete = report.completeness->score;
    s.semantic = semantic_score(s.scale, s.cooccur, *s.complete, params);
  } else {
    s.semantic = semantic_score(s.scale, s.cooccur, params);
  }
  s.orient = report.orientation.score;
  s.prox_overlap = report.overlap.prox_score;
  s.true_overlap = report.overlap.true_score;
  s.overlap = report.overlap.overlap_score;
  s.avg = (s.semantic + s.orient + s.overlap) / 3.0;

  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const CategoryEntry* e = ontology.find(report.object_labels[i]);
    if (e == nullptr || e->support_surfaces.empty()) continue;
    SupportNote note;
    note.object = i;
    note.label = report.object_labels[i];
    note.surfaces.assign(e->support_surfaces.begin(), e->support_surfaces.end());
    std::stable_sort(note.surfaces.begin(), note.surfaces.end(),
                     [](const auto& a, const auto& b) { return a.second.count > b.second.count; });
    report.support.push_back(std::move(note));
  }
  return report;
}

}  // namespace scenelint

#include "scenelint/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "format.hpp"
#include "report_json.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/io.hpp"

namespace scenelint {

using detail::Json;

std::string format_percent(double fraction) {
  const double scaled = std::floor(fraction * 10000.0 + 0.5) / 100.0;
  return detail::fixed(scaled, 2);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// ---- verdict lines ------------------------------------------------------

namespace {

std::vector<std::string> object_names(const std::vector<std::string>& labels) {
  std::map<std::string, int> freq;
  for (const auto& l : labels) freq[l] += 1;
  std::vector<std::string> names;
  names.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    names.push_back(freq[labels[i]] > 1 ? labels[i] + "#" + std::to_string(i) : labels[i]);
  }
  return names;
}

VerdictKind pass_fail(bool ok) { return ok ? VerdictKind::pass : VerdictKind::fail; }

}  // namespace

std::vector<VerdictLine> verdict_lines(const AssessmentReport& report) {
  const std::vector<std::string> names = object_names(report.object_labels);
  auto name_of = [&](std::size_t i, const std::string& fallback) {
    return i < names.size() ? names[i] : fallback;
  };
  std::vector<VerdictLine> semantic;
  std::vector<VerdictLine> orientation;
  std::vector<VerdictLine> overlap;

  for (const ObjectScaleResult& o : report.scale.objects) {
    for (const AxisCheck& a : o.axes) {
      semantic.push_back({"semantic", name_of(o.object, o.label), "scale(" + std::string(to_string(a.axis)) + ")",
                          a.verdict.kind, a.verdict.detail});
    }
  }
  for (const CooccurPairResult& p : report.cooccurrence.pairs) {
    std::string constraint = p.counted ? "cooccurrence" : "cooccurrence(excluded)";
    semantic.push_back({"semantic", p.a + "|" + p.b, std::move(constraint), p.verdict.kind, p.verdict.detail});
  }
  if (report.completeness) {
    for (const CompletenessLine& l : report.completeness->lines) {
      const std::string counts = "placed " + std::to_string(l.actual) + ", expected " + std::to_string(l.expected);
      if (l.matched > 0) {
        semantic.push_back({"semantic", l.label, "completeness(matched)", VerdictKind::pass,
                            std::to_string(l.matched) + " matched (" + counts + ")"});
      }
      if (l.missing > 0) {
        semantic.push_back({"semantic", l.label, "completeness(missing)", VerdictKind::fail,
                            std::to_string(l.missing) + " missing (" + counts + ")"});
      }
      if (l.extra > 0) {
        semantic.push_back({"semantic", l.label, "completeness(extra)", VerdictKind::fail,
                            std::to_string(l.extra) + " extra (" + counts + ")"});
      }
    }
  }
  for (const ObjectOrientationResult& o : report.orientation.objects) {
    for (const OrientationSubCheck& sc : o.subchecks) {
      std::string constraint = "orientation(" + std::string(to_string(sc.kind));
      if (!sc.target.empty()) constraint += ":" + sc.target;
      constraint += ")";
      orientation.push_back({"orientation", name_of(o.object, o.label), std::move(constraint), sc.verdict.kind,
                             sc.verdict.detail});
    }
  }
  for (const OverlapPairResult& p : report.overlap.pairs) {
    const std::string a = name_of(p.i, "#" + std::to_string(p.i));
    const std::string b = name_of(p.j, "#" + std::to_string(p.j));
    const std::string pair = a <= b ? a + "|" + b : b + "|" + a;
    overlap.push_back({"overlap", pair, "overlap(aabb)", pass_fail(p.aabb.passed()), p.aabb.detail});
    overlap.push_back({"overlap", pair, "overlap(obb)", pass_fail(p.obb.passed()), p.obb.detail});
  }

  auto by_object = [](const VerdictLine& x, const VerdictLine& y) {
    if (x.object != y.object) return x.object < y.object;
    return x.constraint < y.constraint;
  };
  std::vector<VerdictLine> out;
  for (auto* group : {&semantic, &orientation, &overlap}) {
    std::stable_sort(group->begin(), group->end(), by_object);
    out.insert(out.end(), group->begin(), group->end());
  }
  return out;
}

// ---- text ---------------------------------------------------------------

std::string render_text(const AssessmentReport& report) {
  const Scores& s = report.scores;
  std::ostringstream out;
  auto row = [&](const char* name, double v) {
    std::string label = name;
    label.resize(10, ' ');
    out << "  " << label << format_percent(v) << "\n";
  };
  out << "Scores\n";
  row("Sem", s.semantic);
  row("Ori", s.orient);
  row("ProxOvlp", s.prox_overlap);
  row("TrueOvlp", s.true_overlap);
  row("Avg", s.avg);
  out << "  (Scale " << format_percent(s.scale) << " | Cooccur " << format_percent(s.cooccur) << " | Complete "
      << (s.complete ? format_percent(*s.complete) : std::string("n/a")) << ")\n";

  const std::vector<VerdictLine> lines = verdict_lines(report);
  std::string section;
  for (const VerdictLine& l : lines) {
    if (l.section != section) {
      section = l.section;
      std::string title = section;
      title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(title[0])));
      out << "\n" << title << "\n";
    }
    out << "  " << (l.kind == VerdictKind::pass ? "✓ " : "✗ ") << l.object << ": " << l.constraint;
    if (l.kind == VerdictKind::soft_fail) out << " [soft]";
    if (l.kind == VerdictKind::hard_fail) out << " [hard]";
    out << ": " << l.evidence << "\n";
  }
  if (!report.support.empty()) {
    out << "\nSupport (informational)\n";
    const std::vector<std::string> names = object_names(report.object_labels);
    for (const SupportNote& n : report.support) {
      out << "  " << (n.object < names.size() ? names[n.object] : n.label) << ":";
      for (const auto& [surface, cf] : n.surfaces) out << " " << surface << " " << format_percent(cf.fraction) << "%";
      out << "\n";
    }
  }
  return out.str();
}

// ---- CSV ----------------------------------------------------------------

std::string render_csv(std::span<const ScoreRow> rows, std::string_view key_column) {
  const bool with_reward = std::any_of(rows.begin(), rows.end(), [](const ScoreRow& r) { return r.reward.has_value(); });
  std::ostringstream out;
  out << csv_escape(key_column) << ",Sem,Ori,ProxOvlp,TrueOvlp,Avg" << (with_reward ? ",reward" : "") << "\n";
  for (const ScoreRow& r : rows) {
    out << csv_escape(r.key) << "," << format_percent(r.scores.semantic) << "," << format_percent(r.scores.orient) << ","
        << format_percent(r.scores.prox_overlap) << "," << format_percent(r.scores.true_overlap) << ","
        << format_percent(r.scores.avg);
    if (with_reward) out << "," << (r.reward ? detail::fixed(*r.reward, 4) : std::string());
    out << "\n";
  }
  return out.str();
}

// ---- JSON ---------------------------------------------------------------

namespace detail {

namespace {

Json opt_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json verdict_json(const Verdict& v) {
  Json j = Json::object();
  j["kind"] = std::string(to_string(v.kind));
  j["detail"] = v.detail;
  j["measured"] = opt_number(v.measured);
  return j;
}

std::optional<double> opt_number_field(const Json& obj, std::string_view key, const std::string& path) {
  const Json* v = find(obj, key);
  if (v == nullptr) return std::nullopt;
  return as_number(*v, join_path(path, key));
}

Verdict verdict_from(const Json& j, const std::string& path) {
  expect_object(j, path);
  Verdict v;
  v.kind = verdict_kind_from_string(string_field(j, "kind", path));
  v.detail = string_field_or(j, "detail", path, "");
  v.measured = opt_number_field(j, "measured", path);
  return v;
}

ScaleAxis axis_from(const std::string& s, const std::string& path) {
  if (s == "width") return ScaleAxis::width;
  if (s == "height") return ScaleAxis::height;
  if (s == "depth") return ScaleAxis::depth;
  throw ParseError(path + ": unknown axis '" + s + "'");
}

AssociationBand band_from(const std::string& s, const std::string& path) {
  for (auto b : {AssociationBand::implausible, AssociationBand::weak, AssociationBand::moderate,
                 AssociationBand::strong}) {
    if (to_string(b) == s) return b;
  }
  throw ParseError(path + ": unknown association band '" + s + "'");
}

OrientationCheckKind check_from(const std::string& s, const std::string& path) {
  for (auto k : {OrientationCheckKind::back_to_wall, OrientationCheckKind::faces_center,
                 OrientationCheckKind::faces_pair}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError(path + ": unknown orientation check '" + s + "'");
}

std::size_t size_field(const Json& obj, std::string_view key, const std::string& path) {
  const std::int64_t v = int_field(obj, key, path);
  if (v < 0) throw ValidationError(join_path(path, key), "must be >= 0");
  return static_cast<std::size_t>(v);
}

template <typename Fn>
void for_each_item(const Json& obj, std::string_view key, const std::string& path, Fn&& fn) {
  const std::string p = join_path(path, key);
  const Json& arr = require(obj, key, path);
  expect_array(arr, p);
  for (std::size_t i = 0; i < arr.size(); ++i) fn(arr[i], index_path(p, i));
}

}  // namespace

Json report_to_json_value(const AssessmentReport& report) {
  const Scores& s = report.scores;
  Json doc = Json::object();
  doc["scores"] = Json{{"scale", s.scale},
                       {"cooccur", s.cooccur},
                       {"complete", opt_number(s.complete)},
                       {"semantic", s.semantic},
                       {"orient", s.orient},
                       {"prox_overlap", s.prox_overlap},
                       {"true_overlap", s.true_overlap},
                       {"overlap", s.overlap},
                       {"avg", s.avg}};
  doc["scores_percent"] = Json{{"Sem", format_percent(s.semantic)},
                               {"Ori", format_percent(s.orient)},
                               {"ProxOvlp", format_percent(s.prox_overlap)},
                               {"TrueOvlp", format_percent(s.true_overlap)},
                               {"Avg", format_percent(s.avg)}};
  doc["objects"] = report.object_labels;

  Json scale = Json::object();
  scale["checked"] = report.scale.checked;
  scale["passed"] = report.scale.passed;
  scale["score"] = report.scale.score;
  Json scale_objects = Json::array();
  for (const ObjectScaleResult& o : report.scale.objects) {
    Json axes = Json::array();
    for (const AxisCheck& a : o.axes) {
      axes.push_back(Json{{"axis", std::string(to_string(a.axis))},
                          {"value", a.value},
                          {"hard_min", a.hard_min},
                          {"hard_max", a.hard_max},
                          {"soft_min", a.soft_min},
                          {"soft_max", a.soft_max},
                          {"verdict", verdict_json(a.verdict)}});
    }
    scale_objects.push_back(Json{{"object", o.object},
                                 {"label", o.label},
                                 {"checked", o.checked},
                                 {"footprint_swapped", o.footprint_swapped},
                                 {"score", o.score},
                                 {"note", o.note},
                                 {"axes", std::move(axes)}});
  }
  scale["objects"] = std::move(scale_objects);
  doc["scale"] = std::move(scale);

  Json co = Json::object();
  co["checked"] = report.cooccurrence.checked;
  co["passed"] = report.cooccurrence.passed;
  co["score"] = report.cooccurrence.score;
  Json pairs = Json::array();
  for (const CooccurPairResult& p : report.cooccurrence.pairs) {
    pairs.push_back(Json{{"a", p.a},
                         {"b", p.b},
                         {"fraction", p.fraction},
                         {"d_min", opt_number(p.d_min)},
                         {"band", std::string(to_string(p.band))},
                         {"counted", p.counted},
                         {"verdict", verdict_json(p.verdict)}});
  }
  co["pairs"] = std::move(pairs);
  doc["cooccurrence"] = std::move(co);

  if (report.completeness) {
    const CompletenessReport& c = *report.completeness;
    Json lines = Json::array();
    for (const CompletenessLine& l : c.lines) {
      lines.push_back(Json{{"label", l.label},
                           {"expected", l.expected},
                           {"actual", l.actual},
                           {"matched", l.matched},
                           {"missing", l.missing},
                           {"extra", l.extra}});
    }
    doc["completeness"] =
        Json{{"matched", c.matched}, {"denominator", c.denominator}, {"score", c.score}, {"lines", std::move(lines)}};
  } else {
    doc["completeness"] = nullptr;
  }

  Json orient = Json::object();
  orient["checked"] = report.orientation.checked;
  orient["passed"] = report.orientation.passed;
  orient["score"] = report.orientation.score;
  Json orient_objects = Json::array();
  for (const ObjectOrientationResult& o : report.orientation.objects) {
    Json subs = Json::array();
    for (const OrientationSubCheck& sc : o.subchecks) {
      subs.push_back(Json{{"kind", std::string(to_string(sc.kind))},
                          {"target", sc.target},
                          {"target_deg", sc.target_deg},
                          {"delta_deg", sc.delta_deg},
                          {"verdict", verdict_json(sc.verdict)}});
    }
    orient_objects.push_back(
        Json{{"object", o.object}, {"label", o.label}, {"score", o.score}, {"subchecks", std::move(subs)}});
  }
  orient["objects"] = std::move(orient_objects);
  doc["orientation"] = std::move(orient);

  Json ov = Json::object();
  ov["checked"] = report.overlap.checked;
  ov["aabb_passed"] = report.overlap.aabb_passed;
  ov["obb_passed"] = report.overlap.obb_passed;
  ov["prox_score"] = report.overlap.prox_score;
  ov["true_score"] = report.overlap.true_score;
  ov["overlap_score"] = report.overlap.overlap_score;
  Json ov_pairs = Json::array();
  for (const OverlapPairResult& p : report.overlap.pairs) {
    ov_pairs.push_back(Json{{"i", p.i},
                            {"j", p.j},
                            {"aabb_overlap", p.aabb_overlap},
                            {"obb_overlap", p.obb_overlap},
                            {"aabb", verdict_json(p.aabb)},
                            {"obb", verdict_json(p.obb)}});
  }
  ov["pairs"] = std::move(ov_pairs);
  doc["overlap"] = std::move(ov);

  Json support = Json::array();
  for (const SupportNote& n : report.support) {
    Json surfaces = Json::array();
    for (const auto& [name, cf] : n.surfaces) {
      surfaces.push_back(Json{{"surface", name}, {"count", cf.count}, {"fraction", cf.fraction}});
    }
    support.push_back(Json{{"object", n.object}, {"label", n.label}, {"surfaces", std::move(surfaces)}});
  }
  doc["support"] = std::move(support);

  Json violations = Json::array();
  Json successes = Json::array();
  for (const VerdictLine& l : verdict_lines(report)) {
    Json j = Json{{"section", l.section},
                  {"object", l.object},
                  {"constraint", l.constraint},
                  {"kind", std::string(to_string(l.kind))},
                  {"evidence", l.evidence}};
    (l.kind == VerdictKind::pass ? successes : violations).push_back(std::move(j));
  }
  doc["violations"] = std::move(violations);
  doc["successes"] = std::move(successes);
  return doc;
}

AssessmentReport report_from_json_value(const Json& doc, const std::string& path) {
  expect_object(doc, path.empty() ? "<root>" : path);
  AssessmentReport r;
  const std::string sp = join_path(path, "scores");
  const Json& scores = require(doc, "scores", path);
  r.scores.scale = number_field(scores, "scale", sp);
  r.scores.cooccur = number_field(scores, "cooccur", sp);
  r.scores.complete = opt_number_field(scores, "complete", sp);
  r.scores.semantic = number_field(scores, "semantic", sp);
  r.scores.orient = number_field(scores, "orient", sp);
  r.scores.prox_overlap = number_field(scores, "prox_overlap", sp);
  r.scores.true_overlap = number_field(scores, "true_overlap", sp);
  r.scores.overlap = number_field(scores, "overlap", sp);
  r.scores.avg = number_field(scores, "avg", sp);
  for_each_item(doc, "objects", path, [&](const Json& v, const std::string& p) { r.object_labels.push_back(as_string(v, p)); });

  const std::string scp = join_path(path, "scale");
  const Json& scale = require(doc, "scale", path);
  r.scale.checked = size_field(scale, "checked", scp);
  r.scale.passed = number_field(scale, "passed", scp);
  r.scale.score = number_field(scale, "score", scp);
  for_each_item(scale, "objects", scp, [&](const Json& o, const std::string& p) {
    ObjectScaleResult res;
    res.object = size_field(o, "object", p);
    res.label = string_field(o, "label", p);
    res.checked = as_bool(require(o, "checked", p), join_path(p, "checked"));
    res.footprint_swapped = as_bool(require(o, "footprint_swapped", p), join_path(p, "footprint_swapped"));
    res.score = number_field(o, "score", p);
    res.note = string_field_or(o, "note", p, "");
    for_each_item(o, "axes", p, [&](const Json& a, const std::string& ap) {
      AxisCheck c;
      c.axis = axis_from(string_field(a, "axis", ap), ap);
      c.value = number_field(a, "value", ap);
      c.hard_min = number_field(a, "hard_min", ap);
      c.hard_max = number_field(a, "hard_max", ap);
      c.soft_min = number_field(a, "soft_min", ap);
      c.soft_max = number_field(a, "soft_max", ap);
      c.verdict = verdict_from(require(a, "verdict", ap), join_path(ap, "verdict"));
      res.axes.push_back(std::move(c));
    });
    r.scale.objects.push_back(std::move(res));
  });

  const std::string cop = join_path(path, "cooccurrence");
  const Json& co = require(doc, "cooccurrence", path);
  r.cooccurrence.checked = size_field(co, "checked", cop);
  r.cooccurrence.passed = size_field(co, "passed", cop);
  r.cooccurrence.score = number_field(co, "score", cop);
  for_each_item(co, "pairs", cop, [&](const Json& j, const std::string& p) {
    CooccurPairResult pr;
    pr.a = string_field(j, "a", p);
    pr.b = string_field(j, "b", p);
    pr.fraction = number_field(j, "fraction", p);
    pr.d_min = opt_number_field(j, "d_min", p);
    pr.band = band_from(string_field(j, "band", p), p);
    pr.counted = as_bool(require(j, "counted", p), join_path(p, "counted"));
    pr.verdict = verdict_from(require(j, "verdict", p), join_path(p, "verdict"));
    r.cooccurrence.pairs.push_back(std::move(pr));
  });

  if (const Json* c = find(doc, "completeness")) {
    const std::string cp = join_path(path, "completeness");
    CompletenessReport cr;
    cr.matched = static_cast<int>(int_field(*c, "matched", cp));
    cr.denominator = static_cast<int>(int_field(*c, "denominator", cp));
    cr.score = number_field(*c, "score", cp);
    for_each_item(*c, "lines", cp, [&](const Json& j, const std::string& p) {
      CompletenessLine l;
      l.label = string_field(j, "label", p);
      l.expected = static_cast<int>(int_field(j, "expected", p));
      l.actual = static_cast<int>(int_field(j, "actual", p));
      l.matched = static_cast<int>(int_field(j, "matched", p));
      l.missing = static_cast<int>(int_field(j, "missing", p));
      l.extra = static_cast<int>(int_field(j, "extra", p));
      cr.lines.push_back(std::move(l));
    });
    r.completeness = std::move(cr);
  }

  const std::string op = join_path(path, "orientation");
  const Json& orient = require(doc, "orientation", path);
  r.orientation.checked = size_field(orient, "checked", op);
  r.orientation.passed = number_field(orient, "passed", op);
  r.orientation.score = number_field(orient, "score", op);
  for_each_item(orient, "objects", op, [&](const Json& o, const std::string& p) {
    ObjectOrientationResult res;
    res.object = size_field(o, "object", p);
    res.label = string_field(o, "label", p);
    res.score = number_field(o, "score", p);
    for_each_item(o, "subchecks", p, [&](const Json& j, const std::string& sp2) {
      OrientationSubCheck sc;
      sc.kind = check_from(string_field(j, "kind", sp2), sp2);
      sc.target = string_field_or(j, "target", sp2, "");
      sc.target_deg = number_field(j, "target_deg", sp2);
      sc.delta_deg = number_field(j, "delta_deg", sp2);
      sc.verdict = verdict_from(require(j, "verdict", sp2), join_path(sp2, "verdict"));
      res.subchecks.push_back(std::move(sc));
    });
    r.orientation.objects.push_back(std::move(res));
  });

  const std::string ovp = join_path(path, "overlap");
  const Json& ov = require(doc, "overlap", path);
  r.overlap.checked = size_field(ov, "checked", ovp);
  r.overlap.aabb_passed = size_field(ov, "aabb_passed", ovp);
  r.overlap.obb_passed = size_field(ov, "obb_passed", ovp);
  r.overlap.prox_score = number_field(ov, "prox_score", ovp);
  r.overlap.true_score = number_field(ov, "true_score", ovp);
  r.overlap.overlap_score = number_field(ov, "overlap_score", ovp);
  for_each_item(ov, "pairs", ovp, [&](const Json& j, const std::string& p) {
    OverlapPairResult pr;
    pr.i = size_field(j, "i", p);
    pr.j = size_field(j, "j", p);
    pr.aabb_overlap = number_field(j, "aabb_overlap", p);
    pr.obb_overlap = number_field(j, "obb_overlap", p);
    pr.aabb = verdict_from(require(j, "aabb", p), join_path(p, "aabb"));
    pr.obb = verdict_from(require(j, "obb", p), join_path(p, "obb"));
    r.overlap.pairs.push_back(std::move(pr));
  });

  if (find(doc, "support")) {
    for_each_item(doc, "support", path, [&](const Json& j, const std::string& p) {
      SupportNote n;
      n.object = size_field(j, "object", p);
      n.label = string_field(j, "label", p);
      for_each_item(j, "surfaces", p, [&](const Json& s, const std::string& sp2) {
        n.surfaces.emplace_back(string_field(s, "surface", sp2),
                                CountFraction{int_field(s, "count", sp2), number_field(s, "fraction", sp2)});
      });
      r.support.push_back(std::move(n));
    });
  }
  return r;
}

}  // namespace detail

std::string report_to_json(const AssessmentReport& report) {
  return detail::dump(detail::report_to_json_value(report));
}

AssessmentReport report_from_json(std::string_view json) {
  return detail::report_from_json_value(detail::parse_json(json, "report"));
}

void save_report(const AssessmentReport& report, const std::filesystem::path& path) {
  write_text_file(path, report_to_json(report));
}

AssessmentReport load_report(const std::filesystem::path& path) { return report_from_json(read_text_file(path)); }

}  // namespace scenelint

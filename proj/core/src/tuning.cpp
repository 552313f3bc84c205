#include "scenelint/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "json_util.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/io.hpp"

namespace scenelint {

using detail::Json;

namespace {

constexpr double kScoreTie = 1e-12;

std::string format_value(double v) {
  char buf[64];
  if (std::floor(v) == v && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.15g", v);
  }
  return buf;
}

GridAxis axis_from(const std::string& name, const Json& values, const std::string& path) {
  using namespace detail;
  if (!is_scalar_param(name)) throw ValidationError(path, "unknown parameter '" + name + "'");
  expect_array(values, path);
  if (values.empty()) throw ValidationError(path, "needs at least one value");
  GridAxis axis{name, {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = as_number(values[i], index_path(path, i));
    if (std::find(axis.values.begin(), axis.values.end(), v) != axis.values.end()) {
      throw ValidationError(index_path(path, i), "duplicate value");
    }
    axis.values.push_back(v);
  }
  return axis;
}

}  // namespace

ParamGrid parse_grid(std::string_view json) {
  using namespace detail;
  const Json doc = parse_json(json, "grid");
  expect_object(doc, "<root>");
  ParamGrid grid;
  if (const Json* base = find(doc, "base")) {
    expect_object(*base, "base");
    grid.base = apply_params_overlay(grid.base, base->dump());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "base") continue;
    if (key == "axes") {
      expect_array(value, "axes");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string p = index_path("axes", i);
        grid.axes.push_back(axis_from(string_field(value[i], "name", p), require(value[i], "values", p),
                                      join_path(p, "values")));
      }
      continue;
    }
    grid.axes.push_back(axis_from(key, value, key));
  }
  if (grid.axes.empty()) throw ValidationError("axes", "grid needs at least one axis");
  for (std::size_t i = 0; i < grid.axes.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.axes.size(); ++j) {
      if (grid.axes[i].name == grid.axes[j].name) throw ValidationError(grid.axes[j].name, "axis listed twice");
    }
  }
  return grid;
}

ParamGrid load_grid(const std::filesystem::path& path) { return parse_grid(read_text_file(path)); }

int leniency_direction(std::string_view param) {
  static const std::map<std::string, int, std::less<>> table = {
      {"soft_angle", +1},        {"hard_angle", +1},        {"overlap_tolerance", +1},
      {"scale_hard_factor", +1}, {"scale_soft_eps", +1},    {"func_dist", +1},
      {"weak_dist", +1},         {"func_thresh", +1},       {"cooccur_thresh", -1},
      {"plausibility_floor", -1}, {"applicability_fraction", 0}, {"faces_pair_radius", 0},
  };
  auto it = table.find(param);
  return it == table.end() ? 0 : it->second;
}

GridExpansion expand_grid(const ParamGrid& grid) {
  GridExpansion out;
  std::size_t total = 1;
  for (const GridAxis& a : grid.axes) total *= a.values.size();
  std::vector<std::size_t> idx(grid.axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (std::size_t k = grid.axes.size(); k-- > 0;) {
      idx[k] = rem % grid.axes[k].values.size();
      rem /= grid.axes[k].values.size();
    }
    Combo c;
    c.params = grid.base;
    std::string label;
    for (std::size_t k = 0; k < grid.axes.size(); ++k) {
      const double v = grid.axes[k].values[idx[k]];
      c.values.push_back(v);
      set_param(c.params, grid.axes[k].name, v);
      label += (k ? ", " : "") + grid.axes[k].name + "=" + format_value(v);
    }
    try {
      c.params.validate();
      if (!(c.params.soft_angle < c.params.hard_angle)) {
        throw ValidationError("hard_angle", "must be > soft_angle");
      }
      if (!(c.params.cooccur_thresh < c.params.func_thresh)) {
        throw ValidationError("func_thresh", "must be > cooccur_thresh");
      }
    } catch (const ValidationError& e) {
      out.skipped.push_back(label + ": " + e.what());
      continue;
    }
    out.combos.push_back(std::move(c));
  }
  return out;
}

std::vector<ReferenceScene> load_reference_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError(dir.string() + ": not a directory");
  const std::string suffix = ".layout.json";
  std::vector<fs::path> layouts;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      layouts.push_back(entry.path());
    }
  }
  std::sort(layouts.begin(), layouts.end());
  std::vector<ReferenceScene> out;
  for (const fs::path& p : layouts) {
    const std::string name = p.filename().string();
    ReferenceScene s;
    s.id = name.substr(0, name.size() - suffix.size());
    try {
      s.layout = load_layout(p);
    } catch (const ValidationError& e) {
      throw ValidationError(name + ": " + e.field(), e.what());
    }
    const fs::path cond = dir / (s.id + ".condition.json");
    if (fs::exists(cond)) s.condition = load_condition(cond);
    out.push_back(std::move(s));
  }
  return out;
}

double metric_value(const Scores& s, std::string_view metric) {
  if (metric == "avg") return s.avg;
  if (metric == "semantic") return s.semantic;
  if (metric == "orient") return s.orient;
  if (metric == "overlap") return s.overlap;
  if (metric == "prox_overlap") return s.prox_overlap;
  if (metric == "true_overlap") return s.true_overlap;
  if (metric == "scale") return s.scale;
  if (metric == "cooccur") return s.cooccur;
  if (metric == "complete") return s.complete.value_or(1.0);
  throw ValidationError("metric", "unknown metric '" + std::string(metric) + "'");
}

bool is_metric(std::string_view metric) {
  for (const char* m :
       {"avg", "semantic", "orient", "overlap", "prox_overlap", "true_overlap", "scale", "cooccur", "complete"}) {
    if (metric == m) return true;
  }
  return false;
}

SweepResult sweep(std::span<const ReferenceScene> scenes, const Ontology& ontology, const ParamGrid& grid,
                  const SweepOptions& options) {
  if (!is_metric(options.metric)) throw ValidationError("metric", "unknown metric '" + options.metric + "'");
  if (scenes.empty()) throw ValidationError("corpus", "sweep needs at least one reference scene");
  GridExpansion expansion = expand_grid(grid);
  if (expansion.combos.size() < 2) {
    throw ValidationError("grid", "sweep needs at least two valid combinations, got " +
                                      std::to_string(expansion.combos.size()));
  }
  const std::size_t nc = expansion.combos.size();
  const std::size_t ns = scenes.size();

  std::vector<std::optional<double>> score(ns * nc);
  std::vector<std::string> error(ns * nc);
  parallel_for(ns * nc, options.jobs, [&](std::size_t cell) {
    const std::size_t s = cell / nc;
    const std::size_t c = cell % nc;
    try {
      const PlacementCondition* cond = scenes[s].condition ? &*scenes[s].condition : nullptr;
      const AssessmentReport r = evaluate(scenes[s].layout, cond, ontology, expansion.combos[c].params);
      score[cell] = metric_value(r.scores, options.metric);
    } catch (const std::exception& e) {
      error[cell] = e.what();
    }
  });

  SweepResult result;
  for (const GridAxis& a : grid.axes) result.axes.push_back(a.name);
  result.scenes = ns;
  result.skipped = std::move(expansion.skipped);
  result.combos.reserve(nc);
  for (Combo& c : expansion.combos) result.combos.push_back({std::move(c), 0, 0.0, 0});

  std::vector<double> sums(nc, 0.0);
  std::vector<std::size_t> ok(nc, 0);
  std::vector<std::vector<bool>> credited(ns, std::vector<bool>(nc, false));
  for (std::size_t s = 0; s < ns; ++s) {
    double best = -1.0;
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& v = score[s * nc + c];
      if (!v) {
        result.combos[c].errors += 1;
        result.errors.push_back(scenes[s].id + ": combo " + std::to_string(c) + ": " + error[s * nc + c]);
        continue;
      }
      sums[c] += *v;
      ok[c] += 1;
      best = std::max(best, *v);
    }
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& v = score[s * nc + c];
      if (!v) continue;
      const bool hit = options.tie_rule == TieRule::argmax ? (*v >= best - kScoreTie) : (*v >= 1.0 - kScoreTie);
      if (hit) {
        result.combos[c].count += 1;
        credited[s][c] = true;
      }
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    result.combos[c].mean_score = ok[c] ? sums[c] / static_cast<double>(ok[c]) : 0.0;
  }

  // Cross-check: with every axis monotone, the most lenient combo must top
  // every scene.
  const bool monotone =
      options.tie_rule == TieRule::argmax && grid.base.weak_pair_policy == WeakPairPolicy::fail &&
      std::all_of(grid.axes.begin(), grid.axes.end(), [](const GridAxis& a) { return leniency_direction(a.name) != 0; });
  if (monotone) {
    std::vector<double> loosest;
    for (const GridAxis& a : grid.axes) {
      loosest.push_back(leniency_direction(a.name) > 0 ? *std::max_element(a.values.begin(), a.values.end())
                                                       : *std::min_element(a.values.begin(), a.values.end()));
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (result.combos[c].combo.values != loosest) continue;
      result.sanity_checked = true;
      for (std::size_t s = 0; s < ns; ++s) {
        if (score[s * nc + c] && !credited[s][c]) {
          result.warnings.push_back(scenes[s].id + ": most lenient combo " + std::to_string(c) +
                                    " is not among the top-scoring combos");
        }
      }
    }
  }
  return result;
}

std::vector<std::size_t> leniency_order(const SweepResult& result) {
  std::vector<int> dir;
  for (const std::string& a : result.axes) dir.push_back(leniency_direction(a));
  std::vector<std::size_t> order(result.combos.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& vx = result.combos[x].combo.values;
    const auto& vy = result.combos[y].combo.values;
    for (std::size_t k = 0; k < dir.size(); ++k) {
      const double d = dir[k] < 0 ? -1.0 : 1.0;
      if (vx[k] != vy[k]) return d * vx[k] < d * vy[k];
    }
    return false;
  });
  return order;
}

Selection select_combo(const SweepResult& result, const SelectOptions& options) {
  if (result.combos.empty()) throw ValidationError("result", "no combinations to select from");
  if (!(options.band_lo >= 0.0 && options.band_lo < options.band_hi && options.band_hi <= 1.0)) {
    throw ValidationError("band", "needs 0 <= lo < hi <= 1");
  }
  constexpr double kSlack = 1e-12;
  const std::vector<std::size_t> order = leniency_order(result);
  const auto n = static_cast<double>(order.size());
  std::vector<double> midpoint(result.combos.size());
  for (std::size_t r = 0; r < order.size(); ++r) midpoint[order[r]] = (static_cast<double>(r) + 0.5) / n;

  Selection sel;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start;
    const double key = result.combos[order[start]].combo.values.front();
    while (end < order.size() && result.combos[order[end]].combo.values.front() == key) ++end;
    const double lo = static_cast<double>(start) / n;
    const double hi = static_cast<double>(end) / n;
    if (lo >= options.band_lo - kSlack && hi <= options.band_hi + kSlack) {
      for (std::size_t r = start; r < end; ++r) sel.in_band.push_back(order[r]);
    }
    start = end;
  }
  if (sel.in_band.empty()) {
    sel.per_combo = true;
    for (std::size_t r = 0; r < order.size(); ++r) {
      const double m = midpoint[order[r]];
      if (m >= options.band_lo - kSlack && m <= options.band_hi + kSlack) sel.in_band.push_back(order[r]);
    }
  }
  if (sel.in_band.empty()) {
    throw ValidationError("band", "no combination falls inside [" + format_value(options.band_lo) + ", " +
                                      format_value(options.band_hi) + "]; widen the band");
  }

  const auto soft = std::find(result.axes.begin(), result.axes.end(), "soft_angle");
  const auto hard = std::find(result.axes.begin(), result.axes.end(), "hard_angle");
  auto doubled = [&](std::size_t c) {
    if (soft == result.axes.end() || hard == result.axes.end()) return false;
    const auto& v = result.combos[c].combo.values;
    return v[hard - result.axes.begin()] == 2.0 * v[soft - result.axes.begin()];
  };
  const double center = (options.band_lo + options.band_hi) / 2.0;
  sel.index = *std::min_element(sel.in_band.begin(), sel.in_band.end(), [&](std::size_t x, std::size_t y) {
    const ComboResult& a = result.combos[x];
    const ComboResult& b = result.combos[y];
    if (a.count != b.count) return a.count > b.count;
    if (doubled(x) != doubled(y)) return doubled(x);
    const double dx = std::abs(midpoint[x] - center);
    const double dy = std::abs(midpoint[y] - center);
    if (dx != dy) return dx < dy;
    return a.combo.values < b.combo.values;
  });
  return sel;
}

std::string selection_overlay(const SweepResult& result, const Selection& selection) {
  Json doc = Json::object();
  const Combo& c = result.combos.at(selection.index).combo;
  for (std::size_t k = 0; k < result.axes.size(); ++k) doc[result.axes[k]] = c.values[k];
  return detail::dump(doc);
}

std::string render_sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  for (const std::string& a : result.axes) out << a << ",";
  out << "count,mean_score,errors\n";
  char buf[32];
  for (const ComboResult& c : result.combos) {
    for (double v : c.combo.values) out << format_value(v) << ",";
    std::snprintf(buf, sizeof buf, "%.6f", c.mean_score);
    out << c.count << "," << buf << "," << c.errors << "\n";
  }
  return out.str();
}

}  // namespace scenelint

#include "scenelint/params.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "json_util.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/io.hpp"

namespace scenelint {

namespace {

using Field = double EvalParams::*;

const std::map<std::string, Field, std::less<>>& field_table() {
  static const std::map<std::string, Field, std::less<>> table = {
      {"scale_hard_factor", &EvalParams::scale_hard_factor},
      {"scale_soft_eps", &EvalParams::scale_soft_eps},
      {"plausibility_floor", &EvalParams::plausibility_floor},
      {"cooccur_thresh", &EvalParams::cooccur_thresh},
      {"func_thresh", &EvalParams::func_thresh},
      {"func_dist", &EvalParams::func_dist},
      {"weak_dist", &EvalParams::weak_dist},
      {"soft_angle", &EvalParams::soft_angle},
      {"hard_angle", &EvalParams::hard_angle},
      {"overlap_tolerance", &EvalParams::overlap_tolerance},
      {"applicability_fraction", &EvalParams::applicability_fraction},
      {"faces_pair_radius", &EvalParams::faces_pair_radius},
  };
  return table;
}

}  // namespace

void EvalParams::validate() const {
  if (!(soft_angle > 0.0)) throw ValidationError("soft_angle", "must be > 0");
  if (!(soft_angle <= hard_angle)) throw ValidationError("hard_angle", "must be >= soft_angle");
  // Angle deltas never exceed 180, so anything above behaves like 180; grids
  // still carry values such as 270.
  if (!(hard_angle <= 360.0)) throw ValidationError("hard_angle", "must be <= 360");
  if (!(scale_hard_factor >= 1.0)) throw ValidationError("scale_hard_factor", "must be >= 1");
  if (!(scale_soft_eps > 0.0)) throw ValidationError("scale_soft_eps", "must be > 0");
  for (const char* name : {"func_dist", "weak_dist", "overlap_tolerance", "faces_pair_radius"}) {
    if (!(get_param(*this, name) > 0.0)) throw ValidationError(name, "must be > 0");
  }
  for (const char* name : {"plausibility_floor", "cooccur_thresh", "func_thresh", "applicability_fraction"}) {
    const double v = get_param(*this, name);
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(name, "must be in [0, 1]");
  }
  double sum = 0.0;
  for (double w : semantic_weights) {
    if (!(w >= 0.0)) throw ValidationError("semantic_weights", "weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("semantic_weights", "weights must sum to 1");
}

const std::vector<std::string>& scalar_param_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : field_table()) out.push_back(name);
    return out;
  }();
  return names;
}

bool is_scalar_param(std::string_view name) { return field_table().contains(name); }

double get_param(const EvalParams& params, std::string_view name) {
  auto it = field_table().find(name);
  if (it == field_table().end()) throw ValidationError(std::string(name), "unknown parameter");
  return params.*(it->second);
}

void set_param(EvalParams& params, std::string_view name, double value) {
  auto it = field_table().find(name);
  if (it == field_table().end()) throw ValidationError(std::string(name), "unknown parameter");
  params.*(it->second) = value;
}

std::string_view to_string(WeakPairPolicy policy) {
  switch (policy) {
    case WeakPairPolicy::fail: return "fail";
    case WeakPairPolicy::pass: return "pass";
    case WeakPairPolicy::exclude: return "exclude";
  }
  return "fail";
}

WeakPairPolicy weak_pair_policy_from_string(std::string_view text) {
  if (text == "fail") return WeakPairPolicy::fail;
  if (text == "pass") return WeakPairPolicy::pass;
  if (text == "exclude") return WeakPairPolicy::exclude;
  throw ValidationError("weak_pair_policy", "expected one of fail|pass|exclude, got '" + std::string(text) + "'");
}

EvalParams apply_params_overlay(const EvalParams& base, std::string_view overlay_json) {
  using namespace detail;
  const Json doc = parse_json(overlay_json, "params overlay");
  expect_object(doc, "<root>");
  EvalParams out = base;
  for (const auto& [key, value] : doc.items()) {
    if (is_scalar_param(key)) {
      set_param(out, key, as_number(value, key));
    } else if (key == "weak_pair_policy") {
      out.weak_pair_policy = weak_pair_policy_from_string(as_string(value, key));
    } else if (key == "semantic_weights") {
      if (!value.is_array() || value.size() != 3) {
        throw ParseError("semantic_weights: expected an array of 3 numbers");
      }
      for (std::size_t i = 0; i < 3; ++i) out.semantic_weights[i] = as_number(value[i], index_path(key, i));
    } else {
      throw ValidationError(key, "unknown parameter");
    }
  }
  out.validate();
  return out;
}

EvalParams load_params_overlay(const std::filesystem::path& path, const EvalParams& base) {
  return apply_params_overlay(base, read_text_file(path));
}

std::string serialize_params(const EvalParams& params) {
  detail::Json doc = detail::Json::object();
  for (const auto& [name, field] : field_table()) doc[name] = params.*field;
  doc["weak_pair_policy"] = std::string(to_string(params.weak_pair_policy));
  doc["semantic_weights"] = detail::Json::array(
      {params.semantic_weights[0], params.semantic_weights[1], params.semantic_weights[2]});
  return detail::dump(doc);
}

}  // namespace scenelint

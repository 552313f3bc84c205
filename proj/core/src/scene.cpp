#include "scenelint/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "scene_json.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/io.hpp"

namespace scenelint {

using detail::Json;

std::string canonical_label(std::string_view label) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!label.empty() && is_space(static_cast<unsigned char>(label.front()))) label.remove_prefix(1);
  while (!label.empty() && is_space(static_cast<unsigned char>(label.back()))) label.remove_suffix(1);
  std::string out(label);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

namespace {

void validate_polygon(const std::vector<Vec2>& polygon, const std::string& field) {
  if (polygon.size() < 3) throw ValidationError(field, "needs at least 3 vertices");
  if (!(signed_area(polygon) > 0.0)) {
    throw ValidationError(field, "must be counterclockwise with positive area");
  }
}

void validate_range(const Rect& r, const std::string& field) {
  if (!(r.x_min < r.x_max)) throw ValidationError(field + ".x_min", "must be < x_max");
  if (!(r.y_min < r.y_max)) throw ValidationError(field + ".y_min", "must be < y_max");
}

std::vector<Vec2> polygon_from_json(const Json& value, const std::string& path) {
  detail::expect_array(value, path);
  std::vector<Vec2> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(detail::point_from_json(value[i], detail::index_path(path, i)));
  }
  return out;
}

Json polygon_to_json(const std::vector<Vec2>& polygon) {
  Json arr = Json::array();
  for (const Vec2& p : polygon) arr.push_back(Json::array({p.x, p.y}));
  return arr;
}

}  // namespace

std::vector<Vec2> SceneLayout::walls() const {
  return floor_polygon.empty() ? rect_polygon(range) : floor_polygon;
}

Vec2 SceneLayout::room_centroid() const {
  return floor_polygon.empty() ? range.center() : vertex_centroid(floor_polygon);
}

void SceneLayout::validate() const {
  validate_range(range, "range");
  if (!floor_polygon.empty()) validate_polygon(floor_polygon, "floor_polygon");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const ObjectInstance& o = objects[i];
    const std::string base = detail::index_path("objects", i);
    if (canonical_label(o.label).empty()) throw ValidationError(base + ".label", "must not be empty");
    if (!std::isfinite(o.cx)) throw ValidationError(base + ".cx", "must be finite");
    if (!std::isfinite(o.cy)) throw ValidationError(base + ".cy", "must be finite");
    if (!(o.w > 0.0) || !std::isfinite(o.w)) throw ValidationError(base + ".w", "must be > 0");
    if (!(o.h > 0.0) || !std::isfinite(o.h)) throw ValidationError(base + ".h", "must be > 0");
    if (!(o.yaw_deg >= 0.0 && o.yaw_deg < 360.0)) {
      throw ValidationError(base + ".yaw_deg", "must be normalized to [0, 360)");
    }
    if (o.mesh_ref) {
      if (!(o.mesh_ref->w > 0.0)) throw ValidationError(base + ".mesh_ref.w", "must be > 0");
      if (!(o.mesh_ref->h > 0.0)) throw ValidationError(base + ".mesh_ref.h", "must be > 0");
      if (!(o.mesh_ref->d > 0.0)) throw ValidationError(base + ".mesh_ref.d", "must be > 0");
    }
  }
}

void PlacementCondition::validate() const {
  validate_range(range, "range");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < required_objects.size(); ++i) {
    const auto& r = required_objects[i];
    const std::string base = detail::index_path("required_objects", i);
    const std::string key = canonical_label(r.label);
    if (key.empty()) throw ValidationError(base + ".label", "must not be empty");
    if (!seen.insert(key).second) throw ValidationError(base + ".label", "duplicate label '" + key + "'");
    if (r.count < 1) throw ValidationError(base + ".count", "expected count must be >= 1");
  }
}

void CorpusScene::validate() const {
  validate_polygon(floor_polygon, "floor_polygon");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string base = detail::index_path("objects", i);
    if (canonical_label(objects[i].category).empty()) {
      throw ValidationError(base + ".category", "must not be empty");
    }
    for (std::size_t k = 0; k < 3; ++k) {
      if (!(objects[i].extents[k] > 0.0)) {
        throw ValidationError(detail::index_path(base + ".extents", k), "must be > 0");
      }
    }
  }
}

namespace detail {

SceneLayout layout_from_json(const Json& doc, PositionAnchor anchor, const std::string& path) {
  expect_object(doc, path.empty() ? "<root>" : path);
  SceneLayout layout;
  layout.description = string_field_or(doc, "description", path, "");
  layout.room_type = string_field_or(doc, "room_type", path, "");
  layout.range = rect_from_json(require(doc, "range", path), join_path(path, "range"));
  if (const Json* poly = find(doc, "floor_polygon")) {
    layout.floor_polygon = polygon_from_json(*poly, join_path(path, "floor_polygon"));
  }
  const std::string objects_path = join_path(path, "objects");
  const Json& objects = require(doc, "objects", path);
  expect_array(objects, objects_path);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string op = index_path(objects_path, i);
    const Json& o = objects[i];
    expect_object(o, op);
    ObjectInstance inst;
    inst.label = string_field(o, "label", op);
    inst.w = number_field(o, "w", op);
    inst.h = number_field(o, "h", op);
    if (anchor == PositionAnchor::min_corner) {
      const char* xk = find(o, "x") ? "x" : "cx";
      const char* yk = find(o, "y") ? "y" : "cy";
      inst.cx = number_field(o, xk, op) + inst.w / 2.0;
      inst.cy = number_field(o, yk, op) + inst.h / 2.0;
    } else {
      inst.cx = number_field(o, "cx", op);
      inst.cy = number_field(o, "cy", op);
    }
    inst.yaw_deg = normalize_deg(find(o, "yaw_deg") ? number_field(o, "yaw_deg", op) : 0.0);
    if (const Json* m = find(o, "mesh_ref")) {
      const std::string mp = join_path(op, "mesh_ref");
      expect_object(*m, mp);
      inst.mesh_ref = MeshRef{number_field(*m, "w", mp), number_field(*m, "h", mp),
                              number_field(*m, "d", mp)};
    }
    layout.objects.push_back(std::move(inst));
  }
  try {
    layout.validate();
  } catch (const ValidationError& e) {
    if (path.empty()) throw;
    throw ValidationError(join_path(path, e.field()), e.what());
  }
  return layout;
}

Json layout_to_json(const SceneLayout& layout) {
  Json doc = Json::object();
  doc["description"] = layout.description;
  doc["room_type"] = layout.room_type;
  doc["range"] = rect_to_json(layout.range);
  if (!layout.floor_polygon.empty()) doc["floor_polygon"] = polygon_to_json(layout.floor_polygon);
  Json objects = Json::array();
  for (const ObjectInstance& o : layout.objects) {
    Json j = Json::object();
    j["label"] = o.label;
    j["cx"] = o.cx;
    j["cy"] = o.cy;
    j["w"] = o.w;
    j["h"] = o.h;
    j["yaw_deg"] = o.yaw_deg;
    if (o.mesh_ref) {
      j["mesh_ref"] = Json{{"w", o.mesh_ref->w}, {"h", o.mesh_ref->h}, {"d", o.mesh_ref->d}};
    }
    objects.push_back(std::move(j));
  }
  doc["objects"] = std::move(objects);
  return doc;
}

PlacementCondition condition_from_json(const Json& doc, const std::string& path) {
  expect_object(doc, path.empty() ? "<root>" : path);
  PlacementCondition c;
  c.description = string_field_or(doc, "description", path, "");
  c.range = rect_from_json(require(doc, "range", path), join_path(path, "range"));
  const std::string rp = join_path(path, "required_objects");
  const Json& req = require(doc, "required_objects", path);
  expect_array(req, rp);
  for (std::size_t i = 0; i < req.size(); ++i) {
    const std::string ip = index_path(rp, i);
    expect_object(req[i], ip);
    RequiredObject r;
    r.label = string_field(req[i], "label", ip);
    r.count = static_cast<int>(int_field(req[i], "count", ip));
    c.required_objects.push_back(std::move(r));
  }
  c.validate();
  return c;
}

Json condition_to_json(const PlacementCondition& condition) {
  Json doc = Json::object();
  doc["description"] = condition.description;
  doc["range"] = rect_to_json(condition.range);
  Json req = Json::array();
  for (const auto& r : condition.required_objects) {
    req.push_back(Json{{"label", r.label}, {"count", r.count}});
  }
  doc["required_objects"] = std::move(req);
  return doc;
}

}  // namespace detail

SceneLayout parse_layout(std::string_view json, PositionAnchor anchor) {
  return detail::layout_from_json(detail::parse_json(json, "layout"), anchor);
}

SceneLayout load_layout(const std::filesystem::path& path, PositionAnchor anchor) {
  return parse_layout(read_text_file(path), anchor);
}

std::string serialize_layout(const SceneLayout& layout) {
  return detail::dump(detail::layout_to_json(layout));
}

void save_layout(const SceneLayout& layout, const std::filesystem::path& path) {
  write_text_file(path, serialize_layout(layout));
}

PlacementCondition parse_condition(std::string_view json) {
  return detail::condition_from_json(detail::parse_json(json, "condition"));
}

PlacementCondition load_condition(const std::filesystem::path& path) {
  return parse_condition(read_text_file(path));
}

std::string serialize_condition(const PlacementCondition& condition) {
  return detail::dump(detail::condition_to_json(condition));
}

void save_condition(const PlacementCondition& condition, const std::filesystem::path& path) {
  write_text_file(path, serialize_condition(condition));
}

CorpusScene parse_corpus_scene(std::string_view json_line) {
  using namespace detail;
  const Json doc = parse_json(json_line, "corpus scene");
  expect_object(doc, "<root>");
  CorpusScene scene;
  scene.scene_id = string_field(doc, "scene_id", "");
  scene.room_type = string_field_or(doc, "room_type", "", "");
  scene.floor_polygon = polygon_from_json(require(doc, "floor_polygon", ""), "floor_polygon");
  const Json& objects = require(doc, "objects", "");
  expect_array(objects, "objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string op = index_path("objects", i);
    const Json& o = objects[i];
    expect_object(o, op);
    CorpusObject obj;
    obj.category = string_field(o, "category", op);
    auto triple = [&](std::string_view key) {
      const std::string kp = join_path(op, key);
      const Json& v = require(o, key, op);
      if (!v.is_array() || v.size() != 3) throw ParseError(kp + ": expected a 3-element array");
      return std::array<double, 3>{as_number(v[0], index_path(kp, 0)), as_number(v[1], index_path(kp, 1)),
                                   as_number(v[2], index_path(kp, 2))};
    };
    obj.center = triple("center");
    obj.extents = triple("extents");
    obj.yaw_deg = normalize_deg(find(o, "yaw_deg") ? number_field(o, "yaw_deg", op) : 0.0);
    scene.objects.push_back(std::move(obj));
  }
  scene.validate();
  return scene;
}

std::string serialize_corpus_scene(const CorpusScene& scene) {
  Json doc = Json::object();
  doc["scene_id"] = scene.scene_id;
  doc["room_type"] = scene.room_type;
  doc["floor_polygon"] = polygon_to_json(scene.floor_polygon);
  Json objects = Json::array();
  for (const CorpusObject& o : scene.objects) {
    Json j = Json::object();
    j["category"] = o.category;
    j["center"] = Json::array({o.center[0], o.center[1], o.center[2]});
    j["extents"] = Json::array({o.extents[0], o.extents[1], o.extents[2]});
    j["yaw_deg"] = o.yaw_deg;
    objects.push_back(std::move(j));
  }
  doc["objects"] = std::move(objects);
  return doc.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace scenelint

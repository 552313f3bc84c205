#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenelint/geometry.hpp"

namespace scenelint {

/// Reference mesh dimensions used to estimate the vertical extent of a
/// footprint-only object.
struct MeshRef {
  double w = 0.0;
  double h = 0.0;
  double d = 0.0;
  friend bool operator==(const MeshRef&, const MeshRef&) = default;
};

/// A placed object. (cx, cy) is the footprint center; w and h are the
/// footprint extents along the object's local x and y axes; yaw is in
/// degrees counterclockwise with 0 facing world +x.
struct ObjectInstance {
  std::string label;
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double h = 1.0;
  double yaw_deg = 0.0;
  std::optional<MeshRef> mesh_ref;

  Vec2 center() const { return {cx, cy}; }
  Obb obb() const { return {{cx, cy}, {w / 2.0, h / 2.0}, yaw_deg}; }
  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

struct SceneLayout {
  std::string description;
  std::string room_type;
  Rect range;
  /// Optional counterclockwise floor outline; when empty, walls are the
  /// edges of `range`.
  std::vector<Vec2> floor_polygon;
  std::vector<ObjectInstance> objects;

  std::vector<Vec2> walls() const;
  /// Mean of the floor polygon vertices, or the range center.
  Vec2 room_centroid() const;
  /// Throws ValidationError naming the offending field.
  void validate() const;
  friend bool operator==(const SceneLayout&, const SceneLayout&) = default;
};

struct RequiredObject {
  std::string label;
  int count = 1;
  friend bool operator==(const RequiredObject&, const RequiredObject&) = default;
};

struct PlacementCondition {
  std::string description;
  Rect range;
  std::vector<RequiredObject> required_objects;

  void validate() const;
  friend bool operator==(const PlacementCondition&, const PlacementCondition&) = default;
};

/// Normalized corpus record. `center` is the 3D box center and `extents` is
/// (w, h, d): footprint along local x, footprint along local y, vertical.
struct CorpusObject {
  std::string category;
  std::array<double, 3> center{};
  std::array<double, 3> extents{};
  double yaw_deg = 0.0;

  double bottom_z() const { return center[2] - extents[2] / 2.0; }
  double top_z() const { return center[2] + extents[2] / 2.0; }
  Obb footprint() const {
    return {{center[0], center[1]}, {extents[0] / 2.0, extents[1] / 2.0}, yaw_deg};
  }
  friend bool operator==(const CorpusObject&, const CorpusObject&) = default;
};

struct CorpusScene {
  std::string scene_id;
  std::string room_type;
  std::vector<Vec2> floor_polygon;
  std::vector<CorpusObject> objects;

  void validate() const;
  friend bool operator==(const CorpusScene&, const CorpusScene&) = default;
};

/// How (cx, cy) in an input file should be interpreted.
enum class PositionAnchor { center, min_corner };

/// Trimmed, lower-cased category key used for every label comparison.
std::string canonical_label(std::string_view label);

SceneLayout parse_layout(std::string_view json, PositionAnchor anchor = PositionAnchor::center);
SceneLayout load_layout(const std::filesystem::path& path,
                        PositionAnchor anchor = PositionAnchor::center);
std::string serialize_layout(const SceneLayout& layout);
void save_layout(const SceneLayout& layout, const std::filesystem::path& path);

PlacementCondition parse_condition(std::string_view json);
PlacementCondition load_condition(const std::filesystem::path& path);
std::string serialize_condition(const PlacementCondition& condition);
void save_condition(const PlacementCondition& condition, const std::filesystem::path& path);

CorpusScene parse_corpus_scene(std::string_view json_line);
/// Single-line JSON, no trailing newline.
std::string serialize_corpus_scene(const CorpusScene& scene);

}  // namespace scenelint

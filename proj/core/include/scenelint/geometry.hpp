#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace scenelint {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double length(Vec2 v);
double distance(Vec2 a, Vec2 b);

/// Axis-aligned rectangle in world coordinates (meters).
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  Vec2 center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Aabb {
  double x_minus = 0.0;
  double y_minus = 0.0;
  double x_plus = 0.0;
  double y_plus = 0.0;
};

/// Oriented box: center, half extents along the local axes, yaw in degrees
/// (counterclockwise, 0 = local +x along world +x).
struct Obb {
  Vec2 center;
  Vec2 half_extents;
  double yaw_deg = 0.0;
};

// ---- angles -------------------------------------------------------------

/// Maps any angle to [0, 360).
double normalize_deg(double deg);

/// Smallest angle between two orientations, in [0, 180].
double angle_delta(double alpha_deg, double beta_deg);

/// Trigonometry in degrees that is exact at multiples of 90 degrees, so
/// quarter-turn boxes produce exactly axis-aligned corners.
double cos_deg(double deg);
double sin_deg(double deg);

/// Unit vector pointing along `deg`.
Vec2 heading(double deg);

/// Bearing from `from` to `to` in [0, 360). Throws std::domain_error when the
/// points coincide.
double direction_to(Vec2 from, Vec2 to);

// ---- boxes --------------------------------------------------------------

/// Counterclockwise corners: local (-,-), (+,-), (+,+), (-,+).
std::array<Vec2, 4> obb_corners(const Obb& box);
Aabb aabb_hull(std::span<const Vec2> points);
Aabb aabb_of(const Obb& box);
Aabb aabb_of(const Rect& rect);

/// min(dx, dy) of the axis-wise intersection when both are strictly
/// positive, else 0. Touching boxes do not overlap.
double aabb_overlap_amount(const Aabb& a, const Aabb& b);

/// Separating-axis test over the four edge normals of the two boxes. Returns
/// 0 when any axis has non-positive projected overlap, otherwise the minimum
/// projected overlap over the axes.
double sat_penetration(const Obb& a, const Obb& b);

/// Point containment in the box footprint (boundary counts as inside).
bool obb_contains(const Obb& box, Vec2 point, double tolerance = 0.0);

// ---- polygons -----------------------------------------------------------

double signed_area(std::span<const Vec2> polygon);
Vec2 vertex_centroid(std::span<const Vec2> polygon);

/// Counterclockwise 4-vertex polygon starting at (x_min, y_min).
std::vector<Vec2> rect_polygon(const Rect& rect);

struct WallHit {
  double inward_normal_deg = 0.0;
  double distance = 0.0;
  std::size_t edge_index = 0;
};

/// Nearest edge of a counterclockwise polygon to `point`. Zero-length edges
/// are skipped; ties go to the lowest edge index. Throws std::domain_error
/// when every edge is degenerate.
WallHit nearest_wall(Vec2 point, std::span<const Vec2> polygon);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

}  // namespace scenelint

#include "scenelint/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace scenelint {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kTieEpsilon = 1e-12;

// Returns the quarter-turn index when deg is an exact multiple of 90.
int quarter_turn(double deg) {
  const double q = deg / 90.0;
  const double r = std::round(q);
  if (r != q || std::abs(r) > 1e15) return -1;
  const auto k = static_cast<long long>(r) % 4;
  return static_cast<int>(k < 0 ? k + 4 : k);
}

}  // namespace

double length(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return length(a - b); }

double normalize_deg(double deg) {
  if (!std::isfinite(deg)) return deg;
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value plus 360 can round to exactly 360.
  if (r >= 360.0) r = 0.0;
  return r == 0.0 ? 0.0 : r;
}

double angle_delta(double alpha_deg, double beta_deg) {
  const double m = normalize_deg(alpha_deg - beta_deg);
  return std::min(m, 360.0 - m);
}

double cos_deg(double deg) {
  switch (quarter_turn(deg)) {
    case 0: return 1.0;
    case 1: return 0.0;
    case 2: return -1.0;
    case 3: return 0.0;
    default: return std::cos(deg * kDegToRad);
  }
}

double sin_deg(double deg) {
  switch (quarter_turn(deg)) {
    case 0: return 0.0;
    case 1: return 1.0;
    case 2: return 0.0;
    case 3: return -1.0;
    default: return std::sin(deg * kDegToRad);
  }
}

Vec2 heading(double deg) { return {cos_deg(deg), sin_deg(deg)}; }

double direction_to(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  if (d.x == 0.0 && d.y == 0.0) {
    throw std::domain_error("direction_to: coincident points have no direction");
  }
  if (d.y == 0.0) return d.x > 0.0 ? 0.0 : 180.0;
  if (d.x == 0.0) return d.y > 0.0 ? 90.0 : 270.0;
  return normalize_deg(std::atan2(d.y, d.x) / kDegToRad);
}

std::array<Vec2, 4> obb_corners(const Obb& box) {
  const double c = cos_deg(box.yaw_deg);
  const double s = sin_deg(box.yaw_deg);
  const double hw = box.half_extents.x;
  const double hh = box.half_extents.y;
  auto corner = [&](double lx, double ly) {
    return Vec2{box.center.x + (c * lx - s * ly), box.center.y + (s * lx + c * ly)};
  };
  return {corner(-hw, -hh), corner(hw, -hh), corner(hw, hh), corner(-hw, hh)};
}

Aabb aabb_hull(std::span<const Vec2> points) {
  Aabb out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& p : points) {
    out.x_minus = std::min(out.x_minus, p.x);
    out.y_minus = std::min(out.y_minus, p.y);
    out.x_plus = std::max(out.x_plus, p.x);
    out.y_plus = std::max(out.y_plus, p.y);
  }
  return out;
}

Aabb aabb_of(const Obb& box) {
  const auto corners = obb_corners(box);
  return aabb_hull(corners);
}

Aabb aabb_of(const Rect& rect) { return {rect.x_min, rect.y_min, rect.x_max, rect.y_max}; }

double aabb_overlap_amount(const Aabb& a, const Aabb& b) {
  const double dx = std::min(a.x_plus, b.x_plus) - std::max(a.x_minus, b.x_minus);
  const double dy = std::min(a.y_plus, b.y_plus) - std::max(a.y_minus, b.y_minus);
  if (dx > 0.0 && dy > 0.0) return std::min(dx, dy);
  return 0.0;
}

double sat_penetration(const Obb& a, const Obb& b) {
  const auto ca = obb_corners(a);
  const auto cb = obb_corners(b);
  const std::array<Vec2, 4> axes = {
      Vec2{cos_deg(a.yaw_deg), sin_deg(a.yaw_deg)},
      Vec2{-sin_deg(a.yaw_deg), cos_deg(a.yaw_deg)},
      Vec2{cos_deg(b.yaw_deg), sin_deg(b.yaw_deg)},
      Vec2{-sin_deg(b.yaw_deg), cos_deg(b.yaw_deg)},
  };
  auto project = [](const std::array<Vec2, 4>& corners, Vec2 axis) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : corners) {
      const double p = dot(v, axis);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    return std::pair{lo, hi};
  };
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& axis : axes) {
    const auto [a_lo, a_hi] = project(ca, axis);
    const auto [b_lo, b_hi] = project(cb, axis);
    const double d = std::min(a_hi, b_hi) - std::max(a_lo, b_lo);
    if (!(d > 0.0)) return 0.0;
    best = std::min(best, d);
  }
  return best;
}

bool obb_contains(const Obb& box, Vec2 point, double tolerance) {
  const Vec2 rel = point - box.center;
  const double c = cos_deg(box.yaw_deg);
  const double s = sin_deg(box.yaw_deg);
  const double lx = c * rel.x + s * rel.y;
  const double ly = -s * rel.x + c * rel.y;
  return std::abs(lx) <= box.half_extents.x + tolerance &&
         std::abs(ly) <= box.half_extents.y + tolerance;
}

double signed_area(std::span<const Vec2> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return twice / 2.0;
}

Vec2 vertex_centroid(std::span<const Vec2> polygon) {
  Vec2 sum;
  for (const Vec2& p : polygon) sum = sum + p;
  const double n = static_cast<double>(polygon.size());
  return {sum.x / n, sum.y / n};
}

std::vector<Vec2> rect_polygon(const Rect& rect) {
  return {{rect.x_min, rect.y_min},
          {rect.x_max, rect.y_min},
          {rect.x_max, rect.y_max},
          {rect.x_min, rect.y_max}};
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

WallHit nearest_wall(Vec2 point, std::span<const Vec2> polygon) {
  WallHit best;
  bool found = false;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[(i + 1) % polygon.size()];
    const Vec2 edge = b - a;
    if (edge.x == 0.0 && edge.y == 0.0) continue;
    const double d = point_segment_distance(point, a, b);
    if (!found || d < best.distance - kTieEpsilon) {
      // Left normal of a counterclockwise edge points into the room.
      best.inward_normal_deg = direction_to({0.0, 0.0}, {-edge.y, edge.x});
      best.distance = d;
      best.edge_index = i;
      found = true;
    }
  }
  if (!found) {
    throw std::domain_error("nearest_wall: polygon has no non-degenerate edge");
  }
  return best;
}

}  // namespace scenelint

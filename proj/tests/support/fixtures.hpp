#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scenelint/ontology.hpp"
#include "scenelint/scene.hpp"
#include "scenelint/tuning.hpp"

namespace fixtures {

/// DimStats with the given p5/p95 and evenly spaced inner percentiles.
scenelint::DimStats dims(double p5, double p95, std::int64_t n = 40);

/// Small bedroom/living-room ontology exercising every verifier: dimension
/// bands, global and per-room co-occurrence edges in every band, and
/// orientation statistics above and below the applicability fraction.
const scenelint::Ontology& ontology();

/// Categories present in `ontology()` plus one unknown label.
const std::vector<std::string>& labels();

/// Up to `max_objects` objects inside a random rectangular range. Yaw is
/// uniform on [0, 360) except for an occasional exact quarter turn; some
/// objects carry mesh references.
scenelint::SceneLayout random_layout(std::mt19937_64& rng, int max_objects = 6);

/// Inventory drawn around the layout's labels, with some counts short or over.
scenelint::PlacementCondition random_condition(std::mt19937_64& rng, const scenelint::SceneLayout& layout);

/// Converts the range walls into an explicit floor polygon.
scenelint::SceneLayout with_floor_polygon(scenelint::SceneLayout layout);

/// Rotates by `deg` about the origin and translates by (tx, ty). The layout
/// must carry a floor polygon; the range becomes its bounding box.
scenelint::SceneLayout rigid_motion(const scenelint::SceneLayout& layout, double deg, double tx, double ty);

/// Reflects x -> -x; yaw -> 180 - yaw; polygon order reversed to stay
/// counterclockwise.
scenelint::SceneLayout mirror_x(const scenelint::SceneLayout& layout);

/// Furnished corpus scenes: floor furniture mostly backed against the
/// nearest wall, lamps stacked on nightstands or desks, rotating room types.
std::vector<scenelint::CorpusScene> synthetic_corpus(std::mt19937_64& rng, int scenes);

/// Seven single-wardrobe rooms whose back-to-wall deltas make the
/// {45, 75, 90, 150} x {90, 150, 180, 270} grid credit 2, 3, 6 and 7 scenes
/// per soft angle, independent of the hard angle.
std::vector<scenelint::ReferenceScene> angle_band_corpus();
std::string angle_band_grid();

/// Nine scenes swept over overlap_tolerance {0.1, 0.3, 0.5} x soft_angle
/// {30, 60}: two neutral, three with a 0.2 m overlap, four with a sofa 45
/// degrees off its wall.
std::vector<scenelint::ReferenceScene> hand_count_corpus();
std::string hand_count_grid();

struct RefineFixture {
  scenelint::PlacementCondition condition;
  scenelint::SceneLayout initial;
};

/// Inventory laid out cleanly in rows, then broken by a `k`-dependent mix of
/// an out-of-bounds object, a missing instance, an extra instance and an
/// overlapping pair. Every k yields at least one violation.
RefineFixture refinement_fixture(int k);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& contents) const;

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures

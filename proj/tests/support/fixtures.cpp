#include "fixtures.hpp"

#include <stdlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

namespace fixtures {

using namespace scenelint;

DimStats dims(double p5, double p95, std::int64_t n) {
  DimStats d;
  d.p5 = p5;
  d.p25 = p5 + (p95 - p5) * 0.25;
  d.median = p5 + (p95 - p5) * 0.5;
  d.p75 = p5 + (p95 - p5) * 0.75;
  d.p95 = p95;
  d.mean = d.median;
  d.std = (p95 - p5) / 4.0;
  d.n = n;
  return d;
}

namespace {

CooccurEdge edge(double p) {
  CooccurEdge e;
  e.count = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::lround(p * 100)));
  e.p_b_given_a = p;
  e.npmi = std::clamp(p - 0.3, -1.0, 1.0);
  return e;
}

CooccurList edges(std::initializer_list<std::pair<const char*, double>> list) {
  CooccurList out;
  for (const auto& [k, p] : list) out.emplace_back(k, edge(p));
  sort_and_cap(out);
  return out;
}

RelationStat rel(double fraction) { return {fraction, 20.0, 30}; }

PairRelationStat pair_rel(double fraction) { return {fraction, 25.0, 1.8, 30}; }

Ontology make_ontology() {
  Ontology o;
  auto& bed = o.categories["bed"];
  bed.dimension = {dims(1.4, 2.0), dims(1.9, 2.2), dims(0.4, 0.7)};
  bed.cooccurrence = edges({{"nightstand", 0.8}, {"wardrobe", 0.3}, {"desk", 0.15}});
  bed.cooccurrence_by_room["bedroom"] = edges({{"nightstand", 0.85}, {"lamp", 0.4}});
  bed.orientation.back_to_wall = rel(0.9);
  bed.room_association["bedroom"] = {50, 0.9};
  bed.support_surfaces["floor"] = {50, 1.0};

  auto& nightstand = o.categories["nightstand"];
  nightstand.dimension = {dims(0.35, 0.6), dims(0.3, 0.5), dims(0.45, 0.7)};
  nightstand.cooccurrence = edges({{"bed", 0.6}, {"lamp", 0.5}});
  nightstand.orientation.back_to_wall = rel(0.7);
  nightstand.support_surfaces["floor"] = {40, 0.95};

  auto& lamp = o.categories["lamp"];
  lamp.dimension.width = dims(0.2, 0.5);
  lamp.dimension.height = dims(0.2, 0.5);
  lamp.cooccurrence = edges({{"nightstand", 0.3}, {"desk", 0.25}});
  lamp.support_surfaces["nightstand"] = {20, 0.5};
  lamp.support_surfaces["desk"] = {12, 0.3};

  auto& desk = o.categories["desk"];
  desk.dimension = {dims(1.0, 1.6), dims(0.5, 0.8), dims(0.7, 0.8)};
  desk.cooccurrence = edges({{"chair", 0.9}, {"lamp", 0.2}});
  desk.orientation.back_to_wall = rel(0.6);

  auto& chair = o.categories["chair"];
  chair.dimension.width = dims(0.4, 0.6);
  chair.dimension.height = dims(0.4, 0.6);
  chair.cooccurrence = edges({{"desk", 0.7}, {"table", 0.45}});
  chair.orientation.faces_center = rel(0.3);
  chair.orientation.faces_pair["desk"] = pair_rel(0.8);
  chair.orientation.faces_pair["table"] = pair_rel(0.55);

  auto& sofa = o.categories["sofa"];
  sofa.dimension.width = dims(1.6, 2.4);
  sofa.dimension.height = dims(0.8, 1.0);
  sofa.cooccurrence = edges({{"tv_stand", 0.75}, {"table", 0.005}});
  sofa.cooccurrence_by_room["living_room"] = edges({{"tv_stand", 0.9}, {"table", 0.5}});
  sofa.orientation.back_to_wall = rel(0.55);
  sofa.orientation.faces_center = rel(0.5);
  sofa.orientation.faces_pair["tv_stand"] = pair_rel(0.6);

  auto& tv = o.categories["tv_stand"];
  tv.dimension.width = dims(1.0, 1.8);
  tv.dimension.height = dims(0.35, 0.5);
  tv.cooccurrence = edges({{"sofa", 0.6}});
  tv.orientation.back_to_wall = rel(0.95);

  auto& table = o.categories["table"];
  table.dimension.width = dims(0.8, 1.6);
  table.dimension.height = dims(0.6, 1.0);
  table.cooccurrence = edges({{"chair", 0.45}});

  auto& wardrobe = o.categories["wardrobe"];
  wardrobe.dimension = {dims(1.0, 2.0), dims(0.55, 0.65), dims(1.8, 2.2)};
  wardrobe.orientation.back_to_wall = rel(0.99);
  wardrobe.cooccurrence = edges({{"bed", 0.4}});

  o.validate();
  return o;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

double sample_extent(std::mt19937_64& rng, const std::optional<DimStats>& stats) {
  if (stats && coin(rng, 0.6)) return uniform(rng, stats->p5, stats->p95);
  const double hi = stats ? stats->p95 * 2.5 : 2.0;
  return uniform(rng, 0.1, hi);
}

// Exact at quarter turns so rotated layouts stay axis-aligned.
std::pair<double, double> cos_sin(double deg) {
  const double q = deg / 90.0;
  if (q == std::round(q)) {
    static constexpr double c[] = {1, 0, -1, 0};
    static constexpr double s[] = {0, 1, 0, -1};
    const auto k = ((static_cast<long long>(q) % 4) + 4) % 4;
    return {c[k], s[k]};
  }
  const double r = deg * std::numbers::pi / 180.0;
  return {std::cos(r), std::sin(r)};
}

double wrap(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  return r;
}

Rect bbox(const std::vector<Vec2>& pts) {
  Rect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Vec2& p : pts) {
    r.x_min = std::min(r.x_min, p.x);
    r.y_min = std::min(r.y_min, p.y);
    r.x_max = std::max(r.x_max, p.x);
    r.y_max = std::max(r.y_max, p.y);
  }
  return r;
}

}  // namespace

const Ontology& ontology() {
  static const Ontology o = make_ontology();
  return o;
}

const std::vector<std::string>& labels() {
  static const std::vector<std::string> l = {"bed",   "nightstand", "lamp",  "desk",     "chair",
                                             "sofa",  "tv_stand",   "table", "wardrobe", "plant"};
  return l;
}

SceneLayout random_layout(std::mt19937_64& rng, int max_objects) {
  SceneLayout layout;
  static const char* rooms[] = {"", "bedroom", "living_room"};
  layout.room_type = rooms[std::uniform_int_distribution<int>(0, 2)(rng)];
  const double x0 = uniform(rng, -2.0, 2.0);
  const double y0 = uniform(rng, -2.0, 2.0);
  layout.range = {x0, y0, x0 + uniform(rng, 3.0, 7.0), y0 + uniform(rng, 3.0, 6.0)};
  const int n = std::uniform_int_distribution<int>(0, max_objects)(rng);
  const auto& names = labels();
  for (int i = 0; i < n; ++i) {
    ObjectInstance o;
    o.label = names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)];
    const CategoryEntry* e = ontology().find(o.label);
    o.w = sample_extent(rng, e ? e->dimension.width : std::nullopt);
    o.h = sample_extent(rng, e ? e->dimension.height : std::nullopt);
    o.cx = uniform(rng, layout.range.x_min + 0.05, layout.range.x_max - 0.05);
    o.cy = uniform(rng, layout.range.y_min + 0.05, layout.range.y_max - 0.05);
    o.yaw_deg = coin(rng, 0.25) ? 90.0 * std::uniform_int_distribution<int>(0, 3)(rng) : uniform(rng, 0.0, 360.0);
    if (o.yaw_deg >= 360.0) o.yaw_deg = 0.0;
    if (coin(rng, 0.4)) o.mesh_ref = MeshRef{uniform(rng, 0.3, 2.0), uniform(rng, 0.3, 2.0), uniform(rng, 0.2, 2.0)};
    if (coin(rng, 0.1)) o.label = " " + std::string(1, static_cast<char>(std::toupper(o.label[0]))) +
                                  o.label.substr(1) + " ";
    layout.objects.push_back(std::move(o));
  }
  return layout;
}

PlacementCondition random_condition(std::mt19937_64& rng, const SceneLayout& layout) {
  PlacementCondition c;
  c.range = layout.range;
  std::map<std::string, int> counts;
  for (const ObjectInstance& o : layout.objects) counts[canonical_label(o.label)] += 1;
  for (const auto& [label, n] : counts) {
    if (coin(rng, 0.15)) continue;
    const int delta = std::uniform_int_distribution<int>(-1, 1)(rng);
    c.required_objects.push_back({label, std::max(1, n + delta)});
  }
  if (coin(rng, 0.3)) {
    const auto& names = labels();
    const std::string extra = names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)];
    if (!counts.contains(extra)) c.required_objects.push_back({extra, 1});
  }
  return c;
}

SceneLayout with_floor_polygon(SceneLayout layout) {
  layout.floor_polygon = rect_polygon(layout.range);
  return layout;
}

SceneLayout rigid_motion(const SceneLayout& layout, double deg, double tx, double ty) {
  if (layout.floor_polygon.empty()) throw std::invalid_argument("rigid_motion needs a floor polygon");
  const auto [c, s] = cos_sin(deg);
  auto move = [&](Vec2 p) { return Vec2{c * p.x - s * p.y + tx, s * p.x + c * p.y + ty}; };
  SceneLayout out = layout;
  for (Vec2& p : out.floor_polygon) p = move(p);
  out.range = bbox(out.floor_polygon);
  for (ObjectInstance& o : out.objects) {
    const Vec2 p = move({o.cx, o.cy});
    o.cx = p.x;
    o.cy = p.y;
    o.yaw_deg = wrap(o.yaw_deg + deg);
  }
  return out;
}

SceneLayout mirror_x(const SceneLayout& layout) {
  SceneLayout out = layout;
  if (out.floor_polygon.empty()) out.floor_polygon = rect_polygon(out.range);
  for (Vec2& p : out.floor_polygon) p.x = -p.x;
  std::reverse(out.floor_polygon.begin(), out.floor_polygon.end());
  out.range = {-layout.range.x_max, layout.range.y_min, -layout.range.x_min, layout.range.y_max};
  for (ObjectInstance& o : out.objects) {
    o.cx = -o.cx;
    o.yaw_deg = wrap(180.0 - o.yaw_deg);
  }
  return out;
}

std::vector<CorpusScene> synthetic_corpus(std::mt19937_64& rng, int scenes) {
  struct Kind {
    const char* name;
    double w, h, d;
  };
  static const Kind floor_kinds[] = {{"bed", 1.6, 2.0, 0.55}, {"nightstand", 0.5, 0.4, 0.55},
                                     {"desk", 1.3, 0.65, 0.75}, {"chair", 0.5, 0.5, 0.9},
                                     {"sofa", 2.0, 0.9, 0.8},   {"wardrobe", 1.5, 0.6, 2.0}};
  static const char* room_types[] = {"bedroom", "living_room", "office", ""};
  std::vector<CorpusScene> out;
  for (int s = 0; s < scenes; ++s) {
    CorpusScene scene;
    scene.scene_id = "syn-" + std::to_string(s);
    scene.room_type = room_types[s % 4];
    const double W = uniform(rng, 3.5, 7.0);
    const double H = uniform(rng, 3.0, 6.0);
    scene.floor_polygon = rect_polygon({0, 0, W, H});
    const int n = std::uniform_int_distribution<int>(2, 7)(rng);
    for (int i = 0; i < n; ++i) {
      const Kind& k = floor_kinds[std::uniform_int_distribution<int>(0, 5)(rng)];
      const double jitter = uniform(rng, 0.85, 1.15);
      CorpusObject o;
      o.category = k.name;
      o.extents = {k.w * jitter, k.h * uniform(rng, 0.9, 1.1), k.d * uniform(rng, 0.9, 1.1)};
      o.center = {uniform(rng, 0.4, W - 0.4), uniform(rng, 0.4, H - 0.4), o.extents[2] / 2.0};
      const WallHit wall = nearest_wall({o.center[0], o.center[1]}, scene.floor_polygon);
      o.yaw_deg = coin(rng, 0.8) ? wall.inward_normal_deg : 90.0 * std::uniform_int_distribution<int>(0, 3)(rng);
      scene.objects.push_back(o);
      if ((std::string(k.name) == "nightstand" || std::string(k.name) == "desk") && coin(rng, 0.6)) {
        CorpusObject lamp;
        lamp.category = "lamp";
        lamp.extents = {0.3, 0.3, 0.5};
        lamp.center = {o.center[0], o.center[1], o.extents[2] + 0.25};
        lamp.yaw_deg = o.yaw_deg;
        scene.objects.push_back(lamp);
      }
    }
    out.push_back(std::move(scene));
  }
  return out;
}

namespace {

ObjectInstance object(const char* label, double cx, double cy, double w, double h, double yaw) {
  ObjectInstance o;
  o.label = label;
  o.cx = cx;
  o.cy = cy;
  o.w = w;
  o.h = h;
  o.yaw_deg = yaw;
  return o;
}

ReferenceScene reference(std::string id, std::vector<ObjectInstance> objects) {
  ReferenceScene s;
  s.id = std::move(id);
  s.layout.range = {0, 0, 5, 4};
  s.layout.objects = std::move(objects);
  return s;
}

}  // namespace

std::vector<ReferenceScene> angle_band_corpus() {
  // Wardrobe against the bottom wall (inward normal 90) turned by `delta`.
  // 30 passes everywhere; 60 needs soft >= 75; 80 needs soft >= 90; 100
  // needs soft 150.
  const std::pair<double, int> deltas[] = {{30, 2}, {60, 1}, {80, 3}, {100, 1}};
  std::vector<ReferenceScene> out;
  for (const auto& [delta, n] : deltas) {
    for (int i = 0; i < n; ++i) {
      out.push_back(reference("wardrobe-" + std::to_string(static_cast<int>(delta)) + "-" + std::to_string(i),
                              {object("wardrobe", 2.5, 0.4, 1.5, 0.6, 90.0 + delta)}));
    }
  }
  return out;
}

std::string angle_band_grid() {
  return R"({"soft_angle": [45, 75, 90, 150], "hard_angle": [90, 150, 180, 270]})";
}

std::vector<ReferenceScene> hand_count_corpus() {
  std::vector<ReferenceScene> out;
  for (int i = 0; i < 2; ++i) out.push_back(reference("neutral-" + std::to_string(i), {object("plant", 1, 1, 0.5, 0.5, 0)}));
  for (int i = 0; i < 3; ++i) {
    out.push_back(reference("overlap-" + std::to_string(i),
                            {object("plant", 1, 1, 0.5, 0.5, 0), object("plant", 1.3, 1, 0.5, 0.5, 0)}));
  }
  for (int i = 0; i < 4; ++i) {
    out.push_back(reference("sofa-" + std::to_string(i), {object("sofa", 2.5, 0.5, 2.0, 0.9, 135)}));
  }
  return out;
}

std::string hand_count_grid() { return R"({"overlap_tolerance": [0.1, 0.3, 0.5], "soft_angle": [30, 60]})"; }

RefineFixture refinement_fixture(int k) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + k));
  std::vector<std::string> pool = {"nightstand", "lamp", "chair", "plant", "desk"};
  std::shuffle(pool.begin(), pool.end(), rng);
  RefineFixture f;
  f.condition.description = "refinement fixture " + std::to_string(k);
  f.condition.range = {0, 0, 8, 6};
  const int n_labels = std::uniform_int_distribution<int>(2, 3)(rng);
  for (int i = 0; i < n_labels; ++i) f.condition.required_objects.push_back({pool[i], std::uniform_int_distribution<int>(1, 2)(rng)});

  SceneLayout& l = f.initial;
  l.range = f.condition.range;
  int slot = 0;
  for (const RequiredObject& r : f.condition.required_objects) {
    const CategoryEntry* e = ontology().find(r.label);
    const double w = e && e->dimension.width ? e->dimension.width->median : 0.5;
    const double h = e && e->dimension.height ? e->dimension.height->median : 0.5;
    for (int c = 0; c < r.count; ++c, ++slot) {
      l.objects.push_back(object(r.label.c_str(), 1.0 + 1.9 * (slot % 4), 1.0 + 1.6 * (slot / 4), w, h, 0.0));
    }
  }

  const int flags = k % 15 + 1;
  if (flags & 1) l.objects[0].cx = l.range.x_max;
  if ((flags & 8) && l.objects.size() >= 2) {
    l.objects[1].cx = l.objects[0].cx + 0.05;
    l.objects[1].cy = l.objects[0].cy + 0.05;
  }
  if (flags & 2) l.objects.pop_back();
  if (flags & 4) {
    ObjectInstance extra = object(f.condition.required_objects[0].label.c_str(), 7.2, 5.2, 0.5, 0.5, 0.0);
    l.objects.push_back(extra);
  }
  return f;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "scenelint-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path TempDir::write(const std::string& name, const std::string& contents) const {
  const std::filesystem::path p = path_ / name;
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return p;
}

}  // namespace fixtures

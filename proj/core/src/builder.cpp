#include "scenelint/builder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "format.hpp"
#include "json_util.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/geometry.hpp"
#include "scenelint/io.hpp"
#include "scenelint/report.hpp"

namespace scenelint {

using detail::Json;

// ---- config -------------------------------------------------------------

void BuilderConfig::validate() const {
  const std::pair<const char*, double> positive[] = {
      {"support_tolerance", support_tolerance},
      {"cooccur_distance_threshold", cooccur_distance_threshold},
      {"back_to_wall_angle", back_to_wall_angle},
      {"faces_center_angle", faces_center_angle},
      {"faces_pair_angle", faces_pair_angle},
      {"faces_pair_radius", faces_pair_radius},
  };
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0)) throw ValidationError(name, "must be > 0");
  }
  if (cooccur_cap < 1) throw ValidationError("cooccur_cap", "must be >= 1");
  if (cooccur_cap > kCooccurCap) {
    throw ValidationError("cooccur_cap", "must be <= " + std::to_string(kCooccurCap));
  }
}

BuilderConfig parse_builder_config(std::string_view json) {
  using namespace detail;
  const Json doc = parse_json(json, "builder config");
  expect_object(doc, "<root>");
  BuilderConfig cfg;
  std::map<std::string, double*> fields = {
      {"support_tolerance", &cfg.support_tolerance},
      {"cooccur_distance_threshold", &cfg.cooccur_distance_threshold},
      {"back_to_wall_angle", &cfg.back_to_wall_angle},
      {"faces_center_angle", &cfg.faces_center_angle},
      {"faces_pair_angle", &cfg.faces_pair_angle},
      {"faces_pair_radius", &cfg.faces_pair_radius},
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "cooccur_cap") {
      const std::int64_t cap = as_int(value, key);
      if (cap < 1) throw ValidationError(key, "must be >= 1");
      cfg.cooccur_cap = static_cast<std::size_t>(cap);
      continue;
    }
    auto it = fields.find(key);
    if (it == fields.end()) throw ValidationError(key, "unknown builder config key");
    *it->second = as_number(value, key);
  }
  cfg.validate();
  return cfg;
}

BuilderConfig load_builder_config(const std::filesystem::path& path) {
  return parse_builder_config(read_text_file(path));
}

namespace {

Json config_to_json(const BuilderConfig& c) {
  return Json{{"support_tolerance", c.support_tolerance},
              {"cooccur_distance_threshold", c.cooccur_distance_threshold},
              {"back_to_wall_angle", c.back_to_wall_angle},
              {"faces_center_angle", c.faces_center_angle},
              {"faces_pair_angle", c.faces_pair_angle},
              {"faces_pair_radius", c.faces_pair_radius},
              {"cooccur_cap", c.cooccur_cap}};
}

}  // namespace

std::string serialize_builder_config(const BuilderConfig& config) { return detail::dump(config_to_json(config)); }

// ---- statistics ---------------------------------------------------------

double percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

}  // namespace

DimStats compute_dim_stats(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("dimension statistics need at least one sample");
  std::sort(samples.begin(), samples.end());
  DimStats d;
  d.n = static_cast<std::int64_t>(samples.size());
  d.p5 = percentile(samples, 0.05);
  d.p25 = percentile(samples, 0.25);
  d.median = percentile(samples, 0.50);
  d.p75 = percentile(samples, 0.75);
  d.p95 = percentile(samples, 0.95);
  double sum = 0.0;
  for (double v : samples) sum += v;
  d.mean = sum / static_cast<double>(d.n);
  double sq = 0.0;
  std::vector<double> dev;
  dev.reserve(samples.size());
  for (double v : samples) dev.push_back((v - d.mean) * (v - d.mean));
  std::sort(dev.begin(), dev.end());
  for (double v : dev) sq += v;
  d.std = std::sqrt(sq / static_cast<double>(d.n));
  return d;
}

// ---- support ------------------------------------------------------------

std::vector<SupportLink> infer_support(const CorpusScene& scene, const BuilderConfig& config) {
  const auto& objs = scene.objects;
  std::vector<std::size_t> order(objs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return objs[a].bottom_z() < objs[b].bottom_z(); });

  std::vector<SupportLink> links(objs.size());
  std::vector<std::size_t> placed;
  placed.reserve(objs.size());
  for (std::size_t idx : order) {
    const CorpusObject& o = objs[idx];
    SupportLink link{idx, SupportKind::unsupported, 0};
    if (o.bottom_z() <= config.support_tolerance) {
      link.kind = SupportKind::floor;
    } else {
      double best_area = -1.0;
      for (std::size_t p : placed) {
        const CorpusObject& s = objs[p];
        if (std::abs(s.top_z() - o.bottom_z()) > config.support_tolerance) continue;
        if (!obb_contains(s.footprint(), {o.center[0], o.center[1]})) continue;
        const double area = s.extents[0] * s.extents[1];
        if (area > best_area || (area == best_area && p < link.supporter)) {
          best_area = area;
          link.kind = SupportKind::object;
          link.supporter = p;
        }
      }
    }
    links[idx] = link;
    placed.push_back(idx);
  }
  return links;
}

SupportFilterConfig default_support_filter_config() {
  SupportFilterConfig c;
  c.support_predicates = {"on",          "on top of",      "sitting on", "sitting on top of", "standing on",
                          "standing on top of", "lying on", "resting on", "placed on",         "laying on"};
  c.impossible_surfaces = {"wall", "window", "ceiling", "door", "picture", "painting", "mirror", "curtain", "light",
                           "lamp", "sky"};
  c.same_category_whitelist = {"book", "box", "plate", "towel", "pillow", "blanket", "paper", "cushion"};
  c.weight_rank = {{"floor", 100},  {"ground", 100}, {"bed", 90},   {"sofa", 85},    {"couch", 85},
                   {"table", 80},   {"desk", 80},    {"cabinet", 80}, {"shelf", 75}, {"counter", 80},
                   {"dresser", 80}, {"chair", 60},   {"stool", 55}, {"nightstand", 60}, {"television", 50},
                   {"tv", 50},      {"box", 30},     {"pillow", 20}, {"lamp", 20},   {"laptop", 20},
                   {"book", 10},    {"plate", 10},   {"bowl", 10},  {"bottle", 10},  {"vase", 10},
                   {"cup", 5},      {"mug", 5},      {"phone", 5},  {"remote", 5},   {"glass", 5}};
  return c;
}

SupportFilterConfig parse_support_filter_config(std::string_view json) {
  using namespace detail;
  const Json doc = parse_json(json, "support filter config");
  expect_object(doc, "<root>");
  SupportFilterConfig c = default_support_filter_config();
  auto strings = [&](const Json& v, const std::string& path) {
    expect_array(v, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(canonical_label(as_string(v[i], index_path(path, i))));
    return out;
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "support_predicates") {
      c.support_predicates = strings(value, key);
    } else if (key == "impossible_surfaces") {
      c.impossible_surfaces = strings(value, key);
    } else if (key == "same_category_whitelist") {
      c.same_category_whitelist = strings(value, key);
    } else if (key == "weight_rank") {
      expect_object(value, key);
      c.weight_rank.clear();
      for (const auto& [cat, rank] : value.items()) {
        c.weight_rank[canonical_label(cat)] = static_cast<int>(as_int(rank, join_path(key, cat)));
      }
    } else {
      throw ValidationError(key, "unknown support filter key");
    }
  }
  return c;
}

std::vector<RelationTriple> filter_support_predicates(std::span<const RelationTriple> triples,
                                                      const SupportFilterConfig& config) {
  auto contains = [](const std::vector<std::string>& list, const std::string& v) {
    return std::find(list.begin(), list.end(), v) != list.end();
  };
  std::vector<RelationTriple> kept;
  for (const RelationTriple& t : triples) {
    const std::string subject = canonical_label(t.subject);
    const std::string object = canonical_label(t.object);
    if (!contains(config.support_predicates, canonical_label(t.predicate))) continue;
    if (contains(config.impossible_surfaces, object)) continue;
    if (subject == object && !contains(config.same_category_whitelist, subject)) continue;
    const auto rs = config.weight_rank.find(subject);
    const auto ro = config.weight_rank.find(object);
    if (rs != config.weight_rank.end() && ro != config.weight_rank.end() && rs->second > ro->second) continue;
    const ImageBox& s = t.subject_box;
    const ImageBox& o = t.object_box;
    const double bottom = s.y + s.h;
    if (bottom < o.y || bottom > o.y + o.h) continue;
    const double horizontal = std::min(s.x + s.w, o.x + o.w) - std::max(s.x, o.x);
    if (!(horizontal > 0.0)) continue;
    kept.push_back(t);
  }
  return kept;
}

std::vector<RelationTriple> parse_relation_triples(std::string_view jsonl) {
  using namespace detail;
  std::vector<RelationTriple> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  auto box = [](const Json& j, const std::string& path) {
    expect_object(j, path);
    return ImageBox{number_field(j, "x", path), number_field(j, "y", path), number_field(j, "w", path),
                    number_field(j, "h", path)};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string path = "line " + std::to_string(line_no);
    const Json j = parse_json(line, path);
    expect_object(j, path);
    RelationTriple t;
    t.subject = string_field(j, "subject", path);
    t.predicate = string_field(j, "predicate", path);
    t.object = string_field(j, "object", path);
    t.subject_box = box(require(j, "subject_box", path), join_path(path, "subject_box"));
    t.object_box = box(require(j, "object_box", path), join_path(path, "object_box"));
    out.push_back(std::move(t));
  }
  return out;
}

// ---- accumulation -------------------------------------------------------

namespace {

void add_cooccur(PartialStats::CooccurCounts& counts, const std::set<std::string>& present,
                 const std::set<std::pair<std::string, std::string>>& near) {
  counts.scenes += 1;
  for (const std::string& c : present) counts.containing[c] += 1;
  for (const auto& pair : near) counts.joint[pair] += 1;
}

void merge_relation(PartialStats::Relation& into, const PartialStats::Relation& from) {
  into.pass += from.pass;
  into.angles.insert(into.angles.end(), from.angles.begin(), from.angles.end());
  into.distances.insert(into.distances.end(), from.distances.begin(), from.distances.end());
}

void merge_counts(PartialStats::CooccurCounts& into, const PartialStats::CooccurCounts& from) {
  into.scenes += from.scenes;
  for (const auto& [k, v] : from.containing) into.containing[k] += v;
  for (const auto& [k, v] : from.joint) into.joint[k] += v;
}

void append(std::vector<double>& into, const std::vector<double>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

}  // namespace

void PartialStats::add_scene(const CorpusScene& scene, const BuilderConfig& config) {
  scenes += 1;
  const std::string room = canonical_label(scene.room_type);
  const auto& objs = scene.objects;
  std::vector<std::string> labels;
  labels.reserve(objs.size());
  for (const CorpusObject& o : objs) labels.push_back(canonical_label(o.category));

  const std::vector<SupportLink> links = infer_support(scene, config);
  const Vec2 centroid = vertex_centroid(scene.floor_polygon);

  for (std::size_t i = 0; i < objs.size(); ++i) {
    const CorpusObject& o = objs[i];
    Category& cat = categories[labels[i]];
    cat.instances += 1;
    cat.width.push_back(o.extents[0]);
    cat.height.push_back(o.extents[1]);
    cat.depth.push_back(o.extents[2]);
    if (!room.empty()) cat.rooms[room] += 1;
    if (links[i].kind == SupportKind::floor) cat.supports["floor"] += 1;
    if (links[i].kind == SupportKind::object) cat.supports[labels[links[i].supporter]] += 1;

    const Vec2 c{o.center[0], o.center[1]};
    const WallHit wall = nearest_wall(c, scene.floor_polygon);
    const double wall_delta = angle_delta(o.yaw_deg, wall.inward_normal_deg);
    cat.back_to_wall.angles.push_back(wall_delta);
    cat.back_to_wall.distances.push_back(wall.distance);
    if (wall_delta <= config.back_to_wall_angle) cat.back_to_wall.pass += 1;

    if (!(c == centroid)) {
      const double dc = angle_delta(o.yaw_deg, direction_to(c, centroid));
      cat.faces_center.angles.push_back(dc);
      cat.faces_center.distances.push_back(distance(c, centroid));
      if (dc <= config.faces_center_angle) cat.faces_center.pass += 1;
    }

    for (std::size_t j = 0; j < objs.size(); ++j) {
      if (j == i) continue;
      const Vec2 t{objs[j].center[0], objs[j].center[1]};
      const double d = distance(c, t);
      if (!(d > 0.0) || d > config.faces_pair_radius) continue;
      const double dp = angle_delta(o.yaw_deg, direction_to(c, t));
      Relation& rel = cat.faces_pair[labels[j]];
      rel.angles.push_back(dp);
      rel.distances.push_back(d);
      if (dp <= config.faces_pair_angle) rel.pass += 1;
    }
  }

  std::set<std::string> present(labels.begin(), labels.end());
  std::set<std::pair<std::string, std::string>> near;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = i + 1; j < objs.size(); ++j) {
      if (labels[i] == labels[j]) continue;
      const double d = distance({objs[i].center[0], objs[i].center[1]}, {objs[j].center[0], objs[j].center[1]});
      if (d <= config.cooccur_distance_threshold) near.insert(std::minmax(labels[i], labels[j]));
    }
  }
  add_cooccur(global, present, near);
  if (!room.empty()) add_cooccur(by_room[room], present, near);
}

void PartialStats::add_support_triples(std::span<const RelationTriple> kept) {
  for (const RelationTriple& t : kept) {
    Category& cat = categories[canonical_label(t.subject)];
    cat.support_observations += 1;
    cat.supports[canonical_label(t.object)] += 1;
  }
}

void PartialStats::merge(const PartialStats& other) {
  scenes += other.scenes;
  for (const auto& [name, from] : other.categories) {
    Category& into = categories[name];
    append(into.width, from.width);
    append(into.height, from.height);
    append(into.depth, from.depth);
    into.instances += from.instances;
    into.support_observations += from.support_observations;
    for (const auto& [k, v] : from.rooms) into.rooms[k] += v;
    for (const auto& [k, v] : from.supports) into.supports[k] += v;
    merge_relation(into.back_to_wall, from.back_to_wall);
    merge_relation(into.faces_center, from.faces_center);
    for (const auto& [k, rel] : from.faces_pair) merge_relation(into.faces_pair[k], rel);
  }
  merge_counts(global, other.global);
  for (const auto& [room, counts] : other.by_room) merge_counts(by_room[room], counts);
}

// ---- finalization -------------------------------------------------------

namespace {

double npmi(std::int64_t joint, std::int64_t na, std::int64_t nb, std::int64_t n) {
  const double p_ab = static_cast<double>(joint) / static_cast<double>(n);
  if (joint == n) return 1.0;
  const double p_a = static_cast<double>(na) / static_cast<double>(n);
  const double p_b = static_cast<double>(nb) / static_cast<double>(n);
  const double pmi = std::log(p_ab / (p_a * p_b));
  return std::clamp(pmi / -std::log(p_ab), -1.0, 1.0);
}

std::map<std::string, CooccurList> edges_from(const PartialStats::CooccurCounts& counts, std::size_t cap) {
  std::map<std::string, CooccurList> out;
  for (const auto& [pair, joint] : counts.joint) {
    if (joint <= 0) continue;
    const auto& [a, b] = pair;
    const std::int64_t na = counts.containing.at(a);
    const std::int64_t nb = counts.containing.at(b);
    const double value = npmi(joint, na, nb, counts.scenes);
    out[a].emplace_back(b, CooccurEdge{joint, static_cast<double>(joint) / static_cast<double>(na), value});
    out[b].emplace_back(a, CooccurEdge{joint, static_cast<double>(joint) / static_cast<double>(nb), value});
  }
  for (auto& [_, list] : out) sort_and_cap(list, cap);
  return out;
}

std::optional<RelationStat> relation_stat(const PartialStats::Relation& r) {
  if (r.angles.empty()) return std::nullopt;
  const auto n = static_cast<std::int64_t>(r.angles.size());
  return RelationStat{static_cast<double>(r.pass) / static_cast<double>(n),
                      sorted_sum(r.angles) / static_cast<double>(n), n};
}

std::map<std::string, CountFraction> fractions(const std::map<std::string, std::int64_t>& counts,
                                               std::int64_t total) {
  std::map<std::string, CountFraction> out;
  if (total <= 0) return out;
  for (const auto& [k, v] : counts) out[k] = {v, static_cast<double>(v) / static_cast<double>(total)};
  return out;
}

DimensionBlock dimension_block(const PartialStats::Category& c) {
  DimensionBlock d;
  if (!c.width.empty()) d.width = compute_dim_stats(c.width);
  if (!c.height.empty()) d.height = compute_dim_stats(c.height);
  if (!c.depth.empty()) d.depth = compute_dim_stats(c.depth);
  return d;
}

OrientationStats orientation_stats(const PartialStats::Category& c) {
  OrientationStats s;
  s.back_to_wall = relation_stat(c.back_to_wall);
  s.faces_center = relation_stat(c.faces_center);
  for (const auto& [target, rel] : c.faces_pair) {
    if (rel.angles.empty()) continue;
    const auto n = static_cast<std::int64_t>(rel.angles.size());
    s.faces_pair[target] = {static_cast<double>(rel.pass) / static_cast<double>(n),
                            sorted_sum(rel.angles) / static_cast<double>(n),
                            sorted_sum(rel.distances) / static_cast<double>(n), n};
  }
  return s;
}

template <typename Fn>
PartialStats accumulate(std::span<const CorpusScene> scenes, Fn&& add) {
  PartialStats stats;
  for (const CorpusScene& s : scenes) add(stats, s);
  return stats;
}

}  // namespace

Ontology finalize_ontology(const PartialStats& stats, const BuilderConfig& config, std::string meta_json) {
  Ontology ont;
  ont.meta_json = std::move(meta_json);
  std::map<std::string, CooccurList> global = edges_from(stats.global, config.cooccur_cap);
  std::map<std::string, std::map<std::string, CooccurList>> rooms;
  for (const auto& [room, counts] : stats.by_room) {
    for (auto& [cat, list] : edges_from(counts, config.cooccur_cap)) rooms[cat][room] = std::move(list);
  }
  for (const auto& [name, c] : stats.categories) {
    CategoryEntry e;
    e.dimension = dimension_block(c);
    e.room_association = fractions(c.rooms, c.instances);
    e.support_surfaces = fractions(c.supports, c.instances + c.support_observations);
    if (auto it = global.find(name); it != global.end()) e.cooccurrence = std::move(it->second);
    if (auto it = rooms.find(name); it != rooms.end()) e.cooccurrence_by_room = std::move(it->second);
    e.orientation = orientation_stats(c);
    ont.categories.emplace(name, std::move(e));
  }
  return ont;
}

std::map<std::string, DimensionBlock> extract_dimensions(std::span<const CorpusScene> scenes) {
  const BuilderConfig cfg;
  const PartialStats stats = accumulate(scenes, [&](PartialStats& p, const CorpusScene& s) { p.add_scene(s, cfg); });
  std::map<std::string, DimensionBlock> out;
  for (const auto& [name, c] : stats.categories) out[name] = dimension_block(c);
  return out;
}

CooccurrenceTables compute_cooccurrence(std::span<const CorpusScene> scenes, const BuilderConfig& config) {
  const PartialStats stats =
      accumulate(scenes, [&](PartialStats& p, const CorpusScene& s) { p.add_scene(s, config); });
  CooccurrenceTables t;
  t.global = edges_from(stats.global, config.cooccur_cap);
  for (const auto& [room, counts] : stats.by_room) t.by_room[room] = edges_from(counts, config.cooccur_cap);
  return t;
}

std::map<std::string, OrientationStats> compute_orientation_stats(std::span<const CorpusScene> scenes,
                                                                  const BuilderConfig& config) {
  const PartialStats stats =
      accumulate(scenes, [&](PartialStats& p, const CorpusScene& s) { p.add_scene(s, config); });
  std::map<std::string, OrientationStats> out;
  for (const auto& [name, c] : stats.categories) out[name] = orientation_stats(c);
  return out;
}

// ---- build --------------------------------------------------------------

namespace {

struct Record {
  std::string origin;  // "<file>:<line>"
  std::string text;
};

PartialStats accumulate_sharded(std::size_t n, const BuildOptions& options,
                                const std::function<void(PartialStats&, std::size_t)>& add_one) {
  const std::size_t shards = std::max<std::size_t>(1, std::min(options.shards, std::max<std::size_t>(n, 1)));
  std::vector<PartialStats> parts(shards);
  parallel_for(shards, options.jobs, [&](std::size_t s) {
    const std::size_t begin = n * s / shards;
    const std::size_t end = n * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) add_one(parts[s], i);
  });
  PartialStats total;
  for (const PartialStats& p : parts) total.merge(p);
  return total;
}

std::string meta_for(const BuildOptions& options, const std::vector<std::string>& corpus, std::size_t scenes,
                     const std::vector<std::string>& errors) {
  Json meta = Json::object();
  meta["builder"] = config_to_json(options.config);
  meta["corpus"] = corpus;
  meta["scenes"] = scenes;
  meta["support_triples"] = options.support_triples.size();
  meta["skipped"] = errors.size();
  meta["errors"] = errors;
  return meta.dump();
}

BuildResult finish(PartialStats stats, const BuildOptions& options, const std::vector<std::string>& corpus,
                   std::vector<std::string> errors) {
  if (!options.support_triples.empty()) {
    stats.add_support_triples(filter_support_predicates(options.support_triples, options.support_filter));
  }
  BuildResult result;
  result.scenes = static_cast<std::size_t>(stats.scenes);
  result.ontology = finalize_ontology(stats, options.config, meta_for(options, corpus, result.scenes, errors));
  result.ontology.validate();
  result.errors = std::move(errors);
  return result;
}

}  // namespace

BuildResult build_ontology(std::span<const CorpusScene> scenes, const BuildOptions& options) {
  options.config.validate();
  std::vector<std::string> shard_errors(scenes.size());
  PartialStats stats = accumulate_sharded(scenes.size(), options, [&](PartialStats& p, std::size_t i) {
    try {
      scenes[i].validate();
      PartialStats one;
      one.add_scene(scenes[i], options.config);
      p.merge(one);
    } catch (const std::exception& e) {
      shard_errors[i] = "scene " + std::to_string(i) + ": " + scenes[i].scene_id + ": " + e.what();
    }
  });
  std::vector<std::string> errors;
  for (auto& e : shard_errors) {
    if (!e.empty()) errors.push_back(std::move(e));
  }
  return finish(std::move(stats), options, {}, std::move(errors));
}

BuildResult build_ontology(std::span<const std::filesystem::path> corpus_files, const BuildOptions& options) {
  options.config.validate();
  std::vector<Record> records;
  std::vector<std::string> names;
  for (const auto& path : corpus_files) {
    names.push_back(path.filename().string());
    std::istringstream in(read_text_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      records.push_back({path.filename().string() + ":" + std::to_string(line_no), std::move(line)});
    }
  }
  std::vector<std::string> record_errors(records.size());
  PartialStats stats = accumulate_sharded(records.size(), options, [&](PartialStats& p, std::size_t i) {
    std::string id = "?";
    try {
      const Json j = Json::parse(records[i].text, nullptr, false);
      if (j.is_object() && j.contains("scene_id") && j["scene_id"].is_string()) id = j["scene_id"].get<std::string>();
      const CorpusScene scene = parse_corpus_scene(records[i].text);
      PartialStats one;
      one.add_scene(scene, options.config);
      p.merge(one);
    } catch (const std::exception& e) {
      record_errors[i] = records[i].origin + ": " + id + ": " + e.what();
    }
  });
  std::vector<std::string> errors;
  for (auto& e : record_errors) {
    if (!e.empty()) errors.push_back(std::move(e));
  }
  return finish(std::move(stats), options, names, std::move(errors));
}

// ---- summary ------------------------------------------------------------

std::string summarize_ontology(const Ontology& ontology) {
  std::ostringstream out;
  out << "panel,key,metric,value\n";
  if (ontology.categories.empty()) return out.str();
  auto row = [&](std::string_view panel, std::string_view key, std::string_view metric, const std::string& value) {
    out << panel << "," << csv_escape(key) << "," << metric << "," << value << "\n";
  };
  for (const auto& [name, e] : ontology.categories) {
    const std::pair<const char*, const std::optional<DimStats>*> axes[] = {
        {"width_median", &e.dimension.width}, {"height_median", &e.dimension.height},
        {"depth_median", &e.dimension.depth}};
    for (const auto& [metric, stat] : axes) {
      if (*stat) row("dimension", name, metric, detail::fixed((*stat)->median, 4));
    }
  }
  std::size_t edges = 0;
  std::size_t positive = 0;
  for (const auto& [name, e] : ontology.categories) {
    for (const auto& [other, edge] : e.cooccurrence) {
      // Each unordered edge is stored under both endpoints; report it once.
      const CategoryEntry* back = ontology.find(other);
      if (name > other && back != nullptr && back->find_edge(name) != nullptr) continue;
      ++edges;
      if (edge.npmi > 0.0) ++positive;
      const std::string key = name + "|" + other;
      row("cooccurrence", key, "count", std::to_string(edge.count));
      row("cooccurrence", key, "npmi", detail::fixed(edge.npmi, 6));
    }
  }
  row("cooccurrence_summary", "all", "edge_count", std::to_string(edges));
  row("cooccurrence_summary", "all", "positive_npmi_fraction",
      detail::fixed(edges == 0 ? 0.0 : static_cast<double>(positive) / static_cast<double>(edges), 6));
  for (const auto& [name, e] : ontology.categories) {
    if (e.orientation.back_to_wall) {
      row("placement", name, "back_to_wall_fraction", detail::fixed(e.orientation.back_to_wall->fraction, 6));
    }
    if (e.orientation.faces_center) {
      row("placement", name, "faces_center_fraction", detail::fixed(e.orientation.faces_center->fraction, 6));
    }
  }
  return out.str();
}

}  // namespace scenelint

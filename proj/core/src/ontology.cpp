#include "scenelint/ontology.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/io.hpp"
#include "scenelint/scene.hpp"

namespace scenelint {

using detail::Json;

namespace {

constexpr double kFractionSlack = 1e-6;

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void validate_dim(const DimStats& d, const std::string& path) {
  if (!(d.p5 <= d.p25 && d.p25 <= d.median && d.median <= d.p75 && d.p75 <= d.p95)) {
    throw ValidationError(path, "percentiles must satisfy p5 <= p25 <= median <= p75 <= p95");
  }
  if (d.n < 1) throw ValidationError(path + ".n", "sample count must be >= 1");
  if (!(d.std >= 0.0)) throw ValidationError(path + ".std", "must be >= 0");
}

void validate_fraction_map(const std::map<std::string, CountFraction>& m, const std::string& path) {
  double sum = 0.0;
  for (const auto& [key, cf] : m) {
    if (cf.count < 0) throw ValidationError(path + "." + key + ".count", "must be >= 0");
    if (!in_unit(cf.fraction)) throw ValidationError(path + "." + key + ".fraction", "must be in [0, 1]");
    sum += cf.fraction;
  }
  if (sum > 1.0 + kFractionSlack) throw ValidationError(path, "fractions sum to more than 1");
}

void validate_cooccur(const CooccurList& list, const std::string& path) {
  if (list.size() > kCooccurCap) {
    throw ValidationError(path, std::to_string(list.size()) + " entries exceed the cap of " +
                                    std::to_string(kCooccurCap));
  }
  for (const auto& [key, e] : list) {
    const std::string p = path + "." + key;
    if (e.count < 1) throw ValidationError(p + ".count", "must be >= 1");
    if (!(e.p_b_given_a > 0.0 && e.p_b_given_a <= 1.0)) {
      throw ValidationError(p + ".p_b_given_a", "must be in (0, 1]");
    }
    if (!(e.npmi >= -1.0 && e.npmi <= 1.0)) throw ValidationError(p + ".npmi", "must be in [-1, 1]");
  }
}

void validate_relation(const RelationStat& r, const std::string& path) {
  if (!in_unit(r.fraction)) throw ValidationError(path + ".fraction", "must be in [0, 1]");
  if (!(r.mean_angle_deg >= 0.0 && r.mean_angle_deg <= 180.0)) {
    throw ValidationError(path + ".mean_angle_deg", "must be in [0, 180]");
  }
  if (r.n < 0) throw ValidationError(path + ".n", "must be >= 0");
}

// ---- JSON -> model ------------------------------------------------------

std::string canonical_key(const std::string& key, const std::string& path) {
  std::string k = canonical_label(key);
  if (k.empty()) throw ValidationError(path, "empty category key");
  return k;
}

DimStats dim_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  expect_object(j, path);
  DimStats d;
  d.p5 = number_field(j, "p5", path);
  d.p25 = number_field(j, "p25", path);
  d.median = number_field(j, "median", path);
  d.p75 = number_field(j, "p75", path);
  d.p95 = number_field(j, "p95", path);
  d.mean = number_field(j, "mean", path);
  d.std = number_field(j, "std", path);
  d.n = int_field(j, "n", path);
  return d;
}

std::map<std::string, CountFraction> fraction_map_from_json(const Json& j, const std::string& path,
                                                            bool canonical) {
  using namespace detail;
  expect_object(j, path);
  std::map<std::string, CountFraction> out;
  for (const auto& [key, value] : j.items()) {
    const std::string p = join_path(path, key);
    const std::string k = canonical ? canonical_key(key, p) : key;
    expect_object(value, p);
    CountFraction cf{int_field(value, "count", p), number_field(value, "fraction", p)};
    if (!out.emplace(k, cf).second) throw ValidationError(p, "duplicate key after normalization");
  }
  return out;
}

CooccurList cooccur_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  expect_object(j, path);
  CooccurList out;
  for (const auto& [key, value] : j.items()) {
    const std::string p = join_path(path, key);
    expect_object(value, p);
    out.emplace_back(canonical_key(key, p),
                     CooccurEdge{int_field(value, "count", p), number_field(value, "p_b_given_a", p),
                                 number_field(value, "npmi", p)});
  }
  validate_cooccur(out, path);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].first == out[i - 1].first) {
      throw ValidationError(join_path(path, out[i].first), "duplicate key after normalization");
    }
  }
  sort_and_cap(out);
  return out;
}

RelationStat relation_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  expect_object(j, path);
  return {number_field(j, "fraction", path), number_field(j, "mean_angle_deg", path), int_field(j, "n", path)};
}

CategoryEntry entry_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  expect_object(j, path);
  CategoryEntry e;
  if (const Json* dim = find(j, "dimension")) {
    const std::string dp = join_path(path, "dimension");
    expect_object(*dim, dp);
    if (const Json* v = find(*dim, "width")) e.dimension.width = dim_from_json(*v, join_path(dp, "width"));
    if (const Json* v = find(*dim, "height")) e.dimension.height = dim_from_json(*v, join_path(dp, "height"));
    if (const Json* v = find(*dim, "depth")) e.dimension.depth = dim_from_json(*v, join_path(dp, "depth"));
  }
  if (const Json* v = find(j, "room_association")) {
    e.room_association = fraction_map_from_json(*v, join_path(path, "room_association"), true);
  }
  if (const Json* v = find(j, "support_surfaces")) {
    e.support_surfaces = fraction_map_from_json(*v, join_path(path, "support_surfaces"), true);
  }
  if (const Json* v = find(j, "cooccurrence")) {
    e.cooccurrence = cooccur_from_json(*v, join_path(path, "cooccurrence"));
  }
  if (const Json* v = find(j, "cooccurrence_by_room")) {
    const std::string rp = join_path(path, "cooccurrence_by_room");
    expect_object(*v, rp);
    for (const auto& [room, list] : v->items()) {
      const std::string p = join_path(rp, room);
      if (!e.cooccurrence_by_room.emplace(canonical_key(room, p), cooccur_from_json(list, p)).second) {
        throw ValidationError(p, "duplicate key after normalization");
      }
    }
  }
  if (const Json* o = find(j, "orientation")) {
    const std::string op = join_path(path, "orientation");
    expect_object(*o, op);
    if (const Json* v = find(*o, "back_to_wall")) {
      e.orientation.back_to_wall = relation_from_json(*v, join_path(op, "back_to_wall"));
    }
    if (const Json* v = find(*o, "faces_center")) {
      e.orientation.faces_center = relation_from_json(*v, join_path(op, "faces_center"));
    }
    if (const Json* fp = find(*o, "faces_pair")) {
      const std::string pp = join_path(op, "faces_pair");
      expect_object(*fp, pp);
      for (const auto& [key, value] : fp->items()) {
        const std::string p = join_path(pp, key);
        expect_object(value, p);
        PairRelationStat s{number_field(value, "fraction", p), number_field(value, "mean_angle_deg", p),
                           number_field(value, "mean_distance_m", p), int_field(value, "n", p)};
        if (!e.orientation.faces_pair.emplace(canonical_key(key, p), s).second) {
          throw ValidationError(p, "duplicate key after normalization");
        }
      }
    }
  }
  return e;
}

// ---- model -> JSON ------------------------------------------------------

Json dim_to_json(const DimStats& d) {
  Json j = Json::object();
  j["p5"] = d.p5;
  j["p25"] = d.p25;
  j["median"] = d.median;
  j["p75"] = d.p75;
  j["p95"] = d.p95;
  j["mean"] = d.mean;
  j["std"] = d.std;
  j["n"] = d.n;
  return j;
}

Json fraction_map_to_json(const std::map<std::string, CountFraction>& m) {
  Json j = Json::object();
  for (const auto& [key, cf] : m) j[key] = Json{{"count", cf.count}, {"fraction", cf.fraction}};
  return j;
}

Json cooccur_to_json(const CooccurList& list) {
  Json j = Json::object();
  for (const auto& [key, e] : list) {
    j[key] = Json{{"count", e.count}, {"p_b_given_a", e.p_b_given_a}, {"npmi", e.npmi}};
  }
  return j;
}

Json relation_to_json(const RelationStat& r) {
  return Json{{"fraction", r.fraction}, {"mean_angle_deg", r.mean_angle_deg}, {"n", r.n}};
}

Json entry_to_json(const CategoryEntry& e) {
  Json j = Json::object();
  Json dim = Json::object();
  if (e.dimension.width) dim["width"] = dim_to_json(*e.dimension.width);
  if (e.dimension.height) dim["height"] = dim_to_json(*e.dimension.height);
  if (e.dimension.depth) dim["depth"] = dim_to_json(*e.dimension.depth);
  j["dimension"] = std::move(dim);
  j["room_association"] = fraction_map_to_json(e.room_association);
  j["support_surfaces"] = fraction_map_to_json(e.support_surfaces);
  j["cooccurrence"] = cooccur_to_json(e.cooccurrence);
  Json by_room = Json::object();
  for (const auto& [room, list] : e.cooccurrence_by_room) by_room[room] = cooccur_to_json(list);
  j["cooccurrence_by_room"] = std::move(by_room);
  Json orient = Json::object();
  if (e.orientation.back_to_wall) orient["back_to_wall"] = relation_to_json(*e.orientation.back_to_wall);
  if (e.orientation.faces_center) orient["faces_center"] = relation_to_json(*e.orientation.faces_center);
  Json pairs = Json::object();
  for (const auto& [key, s] : e.orientation.faces_pair) {
    pairs[key] = Json{{"fraction", s.fraction},
                      {"mean_angle_deg", s.mean_angle_deg},
                      {"mean_distance_m", s.mean_distance_m},
                      {"n", s.n}};
  }
  orient["faces_pair"] = std::move(pairs);
  j["orientation"] = std::move(orient);
  return j;
}

const CooccurEdge* find_in(const CooccurList& list, std::string_view key) {
  for (const auto& [k, e] : list) {
    if (k == key) return &e;
  }
  return nullptr;
}

}  // namespace

void sort_and_cap(CooccurList& list, std::size_t cap) {
  std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.first < b.first;
  });
  if (list.size() > cap) list.resize(cap);
}

const CooccurEdge* CategoryEntry::find_edge(std::string_view other, std::optional<std::string_view> room) const {
  if (room) {
    auto it = cooccurrence_by_room.find(std::string(*room));
    return it == cooccurrence_by_room.end() ? nullptr : find_in(it->second, other);
  }
  return find_in(cooccurrence, other);
}

const CategoryEntry* Ontology::find(std::string_view label) const {
  auto it = categories.find(canonical_label(label));
  return it == categories.end() ? nullptr : &it->second;
}

void Ontology::validate() const {
  for (const auto& [name, e] : categories) {
    const std::string base = "categories." + name;
    if (e.dimension.width) validate_dim(*e.dimension.width, base + ".dimension.width");
    if (e.dimension.height) validate_dim(*e.dimension.height, base + ".dimension.height");
    if (e.dimension.depth) validate_dim(*e.dimension.depth, base + ".dimension.depth");
    validate_fraction_map(e.room_association, base + ".room_association");
    validate_fraction_map(e.support_surfaces, base + ".support_surfaces");
    validate_cooccur(e.cooccurrence, base + ".cooccurrence");
    for (const auto& [room, list] : e.cooccurrence_by_room) {
      validate_cooccur(list, base + ".cooccurrence_by_room." + room);
    }
    const std::string op = base + ".orientation";
    if (e.orientation.back_to_wall) validate_relation(*e.orientation.back_to_wall, op + ".back_to_wall");
    if (e.orientation.faces_center) validate_relation(*e.orientation.faces_center, op + ".faces_center");
    for (const auto& [target, s] : e.orientation.faces_pair) {
      const std::string p = op + ".faces_pair." + target;
      validate_relation({s.fraction, s.mean_angle_deg, s.n}, p);
      if (!(s.mean_distance_m >= 0.0)) throw ValidationError(p + ".mean_distance_m", "must be >= 0");
    }
  }
}

Ontology parse_ontology(std::string_view json) {
  using namespace detail;
  const Json doc = parse_json(json, "ontology");
  expect_object(doc, "<root>");
  Ontology ont;
  const Json& cats = require(doc, "categories", "");
  expect_object(cats, "categories");
  for (const auto& [key, value] : cats.items()) {
    const std::string p = join_path("categories", key);
    if (!ont.categories.emplace(canonical_key(key, p), entry_from_json(value, p)).second) {
      throw ValidationError(p, "duplicate category after normalization");
    }
  }
  if (const Json* meta = find(doc, "meta")) {
    expect_object(*meta, "meta");
    ont.meta_json = meta->dump();
  }
  ont.validate();
  return ont;
}

Ontology load_ontology(const std::filesystem::path& path) { return parse_ontology(read_text_file(path)); }

std::string serialize_ontology(const Ontology& ontology) {
  Json doc = Json::object();
  Json cats = Json::object();
  for (const auto& [name, e] : ontology.categories) cats[name] = entry_to_json(e);
  doc["categories"] = std::move(cats);
  doc["meta"] = detail::parse_json(ontology.meta_json.empty() ? "{}" : ontology.meta_json, "ontology meta");
  return detail::dump(doc);
}

void save_ontology(const Ontology& ontology, const std::filesystem::path& path) {
  write_text_file(path, serialize_ontology(ontology));
}

double cooccur_fraction(const Ontology& ontology, std::string_view a, std::string_view b,
                        std::optional<std::string_view> room) {
  const std::string ka = canonical_label(a);
  const std::string kb = canonical_label(b);
  const CategoryEntry* ea = ontology.find(ka);
  const CategoryEntry* eb = ontology.find(kb);
  std::optional<std::string> room_key;
  if (room && !room->empty()) {
    const std::string rk = canonical_label(*room);
    const bool has_room = (ea && ea->cooccurrence_by_room.contains(rk)) ||
                          (eb && eb->cooccurrence_by_room.contains(rk));
    if (has_room) room_key = rk;
  }
  std::optional<std::string_view> lookup_room;
  if (room_key) lookup_room = *room_key;
  double f = 0.0;
  if (ea) {
    if (const CooccurEdge* e = ea->find_edge(kb, lookup_room)) f = std::max(f, e->p_b_given_a);
  }
  if (eb) {
    if (const CooccurEdge* e = eb->find_edge(ka, lookup_room)) f = std::max(f, e->p_b_given_a);
  }
  return f;
}

OrientationChecks orientation_checks_for(const Ontology& ontology, std::string_view category,
                                         const EvalParams& params) {
  OrientationChecks checks;
  const CategoryEntry* e = ontology.find(category);
  if (e == nullptr) return checks;
  const double t = params.applicability_fraction;
  const auto& o = e->orientation;
  checks.back_to_wall = o.back_to_wall && o.back_to_wall->fraction >= t;
  checks.faces_center = o.faces_center && o.faces_center->fraction >= t;
  for (const auto& [target, s] : o.faces_pair) {
    if (s.fraction >= t) checks.faces_pair.push_back(target);
  }
  return checks;
}

}  // namespace scenelint

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenelint/params.hpp"

namespace scenelint {

inline constexpr std::size_t kCooccurCap = 50;

struct DimStats {
  double p5 = 0.0;
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
  double p95 = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::int64_t n = 0;
  friend bool operator==(const DimStats&, const DimStats&) = default;
};

/// Missing axes stay empty so the scale verifier can skip them.
struct DimensionBlock {
  std::optional<DimStats> width;
  std::optional<DimStats> height;
  std::optional<DimStats> depth;
  friend bool operator==(const DimensionBlock&, const DimensionBlock&) = default;
};

struct CountFraction {
  std::int64_t count = 0;
  double fraction = 0.0;
  friend bool operator==(const CountFraction&, const CountFraction&) = default;
};

/// Edge stored under key b inside entry a: `p_b_given_a` is P(b | a).
struct CooccurEdge {
  std::int64_t count = 0;
  double p_b_given_a = 0.0;
  double npmi = 0.0;
  friend bool operator==(const CooccurEdge&, const CooccurEdge&) = default;
};

/// Sorted by count descending, then by category name; at most kCooccurCap.
using CooccurList = std::vector<std::pair<std::string, CooccurEdge>>;

struct RelationStat {
  double fraction = 0.0;
  double mean_angle_deg = 0.0;
  std::int64_t n = 0;
  friend bool operator==(const RelationStat&, const RelationStat&) = default;
};

struct PairRelationStat {
  double fraction = 0.0;
  double mean_angle_deg = 0.0;
  double mean_distance_m = 0.0;
  std::int64_t n = 0;
  friend bool operator==(const PairRelationStat&, const PairRelationStat&) = default;
};

struct OrientationStats {
  std::optional<RelationStat> back_to_wall;
  std::optional<RelationStat> faces_center;
  std::map<std::string, PairRelationStat> faces_pair;
  friend bool operator==(const OrientationStats&, const OrientationStats&) = default;
};

struct CategoryEntry {
  DimensionBlock dimension;
  std::map<std::string, CountFraction> room_association;
  std::map<std::string, CountFraction> support_surfaces;
  CooccurList cooccurrence;
  std::map<std::string, CooccurList> cooccurrence_by_room;
  OrientationStats orientation;

  /// Edge toward `other` in the global list, or in the `room` list when given.
  const CooccurEdge* find_edge(std::string_view other, std::optional<std::string_view> room = {}) const;
  friend bool operator==(const CategoryEntry&, const CategoryEntry&) = default;
};

struct Ontology {
  /// Keys are canonical labels (trimmed, lower case).
  std::map<std::string, CategoryEntry, std::less<>> categories;
  /// Build provenance as a JSON object text; "{}" when absent.
  std::string meta_json = "{}";

  const CategoryEntry* find(std::string_view label) const;
  /// Throws ValidationError naming the path into the document.
  void validate() const;
  friend bool operator==(const Ontology&, const Ontology&) = default;
};

/// Sorts by count descending then name, and truncates to `cap`.
void sort_and_cap(CooccurList& list, std::size_t cap = kCooccurCap);

Ontology parse_ontology(std::string_view json);
Ontology load_ontology(const std::filesystem::path& path);
std::string serialize_ontology(const Ontology& ontology);
void save_ontology(const Ontology& ontology, const std::filesystem::path& path);

/// max(P(a|b), P(b|a)). Room-conditioned edges are used when `room` is given
/// and either category has a table for it; otherwise global edges. Returns 0
/// when no edge is recorded in either direction.
double cooccur_fraction(const Ontology& ontology, std::string_view a, std::string_view b,
                        std::optional<std::string_view> room = {});

struct OrientationChecks {
  bool back_to_wall = false;
  bool faces_center = false;
  std::vector<std::string> faces_pair;  // sorted target categories

  bool empty() const { return !back_to_wall && !faces_center && faces_pair.empty(); }
  friend bool operator==(const OrientationChecks&, const OrientationChecks&) = default;
};

/// A sub-check applies when its recorded fraction is at least
/// `params.applicability_fraction`. Unknown categories yield no checks.
OrientationChecks orientation_checks_for(const Ontology& ontology, std::string_view category,
                                         const EvalParams& params);

}  // namespace scenelint

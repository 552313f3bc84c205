#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenelint/ontology.hpp"
#include "scenelint/scene.hpp"

namespace scenelint {

struct BuilderConfig {
  double support_tolerance = 0.05;           // meters
  double cooccur_distance_threshold = 5.0;   // meters, 2D center distance
  double back_to_wall_angle = 45.0;          // degrees
  double faces_center_angle = 60.0;          // degrees
  double faces_pair_angle = 60.0;            // degrees
  double faces_pair_radius = 5.0;            // meters
  std::size_t cooccur_cap = kCooccurCap;

  void validate() const;
  friend bool operator==(const BuilderConfig&, const BuilderConfig&) = default;
};

/// Missing keys keep their defaults; unknown keys are errors.
BuilderConfig parse_builder_config(std::string_view json);
BuilderConfig load_builder_config(const std::filesystem::path& path);
std::string serialize_builder_config(const BuilderConfig& config);

/// Linear interpolation between order statistics at rank p * (n - 1).
/// `sorted` must be non-empty and ascending.
double percentile(std::span<const double> sorted, double p);

/// Percentiles, mean and population std of `samples` (any order, non-empty).
DimStats compute_dim_stats(std::vector<double> samples);

// ---- support ------------------------------------------------------------

enum class SupportKind { floor, object, unsupported };

struct SupportLink {
  std::size_t object = 0;
  SupportKind kind = SupportKind::unsupported;
  /// Index of the supporting object when kind == object.
  std::size_t supporter = 0;
  friend bool operator==(const SupportLink&, const SupportLink&) = default;
};

/// One link per object, in the scene's object order. Objects are placed in
/// ascending bottom-z order; a supporter must already be placed, have its
/// top within tolerance of the object's bottom, and contain the object's
/// center in its footprint. Ties go to the largest footprint.
std::vector<SupportLink> infer_support(const CorpusScene& scene, const BuilderConfig& config);

/// Image-space box with y growing downward.
struct ImageBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  friend bool operator==(const ImageBox&, const ImageBox&) = default;
};

struct RelationTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  ImageBox subject_box;
  ImageBox object_box;
  friend bool operator==(const RelationTriple&, const RelationTriple&) = default;
};

struct SupportFilterConfig {
  std::vector<std::string> support_predicates;
  std::vector<std::string> impossible_surfaces;
  std::vector<std::string> same_category_whitelist;
  /// Larger rank means heavier. Categories without a rank skip the weight rule.
  std::map<std::string, int> weight_rank;
};

SupportFilterConfig default_support_filter_config();
SupportFilterConfig parse_support_filter_config(std::string_view json);

/// Keeps support-class triples that pass the impossible-surface,
/// same-category, weight and spatial rules.
std::vector<RelationTriple> filter_support_predicates(std::span<const RelationTriple> triples,
                                                      const SupportFilterConfig& config);

/// One triple per line: {"subject","predicate","object","subject_box":{x,y,w,h},"object_box":{...}}.
std::vector<RelationTriple> parse_relation_triples(std::string_view jsonl);

// ---- accumulation -------------------------------------------------------

/// Mergeable per-corpus counters. Sample lists are kept exactly and sorted
/// at finalization, so any partition or merge order gives identical output.
struct PartialStats {
  struct Relation {
    std::int64_t pass = 0;
    std::vector<double> angles;
    std::vector<double> distances;
  };
  struct Category {
    std::vector<double> width;
    std::vector<double> height;
    std::vector<double> depth;
    std::int64_t instances = 0;
    std::int64_t support_observations = 0;
    std::map<std::string, std::int64_t> rooms;
    std::map<std::string, std::int64_t> supports;
    Relation back_to_wall;
    Relation faces_center;
    std::map<std::string, Relation> faces_pair;
  };
  /// Scene-level counts for one room subset (empty key = all scenes).
  struct CooccurCounts {
    std::int64_t scenes = 0;
    std::map<std::string, std::int64_t> containing;
    std::map<std::pair<std::string, std::string>, std::int64_t> joint;
  };

  std::map<std::string, Category> categories;
  CooccurCounts global;
  std::map<std::string, CooccurCounts> by_room;
  std::int64_t scenes = 0;

  void add_scene(const CorpusScene& scene, const BuilderConfig& config);
  void add_support_triples(std::span<const RelationTriple> kept);
  void merge(const PartialStats& other);
};

std::map<std::string, DimensionBlock> extract_dimensions(std::span<const CorpusScene> scenes);

struct CooccurrenceTables {
  std::map<std::string, CooccurList> global;
  /// room type -> category -> edges
  std::map<std::string, std::map<std::string, CooccurList>> by_room;
};

CooccurrenceTables compute_cooccurrence(std::span<const CorpusScene> scenes, const BuilderConfig& config);

std::map<std::string, OrientationStats> compute_orientation_stats(std::span<const CorpusScene> scenes,
                                                                  const BuilderConfig& config);

/// Assembles an ontology from accumulated statistics. `meta_json` is stored
/// verbatim.
Ontology finalize_ontology(const PartialStats& stats, const BuilderConfig& config, std::string meta_json = "{}");

struct BuildOptions {
  BuilderConfig config;
  /// Contiguous corpus partitions accumulated independently then merged.
  std::size_t shards = 1;
  std::size_t jobs = 1;
  /// Raw relation triples; filtered with `support_filter` before counting.
  std::vector<RelationTriple> support_triples;
  SupportFilterConfig support_filter = default_support_filter_config();
};

struct BuildResult {
  Ontology ontology;
  std::size_t scenes = 0;
  /// "<file>:<line>: <scene_id>: <message>" for every skipped record.
  std::vector<std::string> errors;
};

BuildResult build_ontology(std::span<const CorpusScene> scenes, const BuildOptions& options);

/// Reads JSONL corpus files; malformed records are skipped and reported.
BuildResult build_ontology(std::span<const std::filesystem::path> corpus_files, const BuildOptions& options);

/// Long-form plot table with header "panel,key,metric,value".
std::string summarize_ontology(const Ontology& ontology);

}  // namespace scenelint

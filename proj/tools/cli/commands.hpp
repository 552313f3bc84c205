#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace scenelint::cli {

struct Common {
  int verbosity = 0;  // -1 quiet, 0 normal, 1 verbose
  std::size_t jobs = 0;
};

struct EvaluateArgs {
  std::string layout;
  std::string ontology;
  std::string condition;
  std::string params;
  std::string format = "json";
  std::string out;
  std::string anchor = "center";
};

struct BatchArgs {
  std::vector<std::string> layouts;
  std::string ontology;
  std::string params;
  std::string format = "csv";
  std::string out;
  std::string anchor = "center";
};

struct BuildArgs {
  std::vector<std::string> corpus;
  std::string config;
  std::string out;
  std::string relations;
  std::string support_filter;
  std::size_t shards = 0;
};

struct StatsArgs {
  std::string ontology;
  std::string out;
};

struct TuneArgs {
  std::string corpus;
  std::string ontology;
  std::string grid;
  std::string out;
  bool select = false;
  double band_lo = 0.30;
  double band_hi = 0.70;
  std::string metric = "avg";
  std::string tie_rule = "argmax";
  std::string overlay_out;
};

struct RefineArgs {
  std::string condition;
  std::string ontology;
  std::string critic = "heuristic";
  std::string modality = "text";
  std::vector<std::string> images;
  std::string stub_dir;
  std::size_t max_iters = 5;
  double stop_reward = 1.0;
  std::string out;
  std::string csv;
  std::string initial;
  std::string params;
  std::string room_type;
};

int run_evaluate(const EvaluateArgs& args, const Common& common);
int run_batch(const BatchArgs& args, const Common& common);
int run_build(const BuildArgs& args, const Common& common);
int run_stats(const StatsArgs& args, const Common& common);
int run_tune(const TuneArgs& args, const Common& common);
int run_refine(const RefineArgs& args, const Common& common);

}  // namespace scenelint::cli

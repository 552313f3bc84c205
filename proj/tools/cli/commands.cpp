#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include "json.hpp"
#include "scenelint/scenelint.hpp"

namespace scenelint::cli {

namespace fs = std::filesystem;

namespace {

void require_file(const std::string& path, const char* what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw IoError(std::string(what) + " not found: " + path);
}

void require_dir(const std::string& path, const char* what) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) throw IoError(std::string(what) + " is not a directory: " + path);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(out, text);
  }
}

PositionAnchor anchor_from(const std::string& s) {
  return s == "min_corner" ? PositionAnchor::min_corner : PositionAnchor::center;
}

EvalParams params_from(const std::string& path) {
  if (path.empty()) return {};
  return load_params_overlay(path);
}

std::size_t jobs_of(const Common& c) { return c.jobs == 0 ? default_jobs() : c.jobs; }

/// "room.layout.json" -> "room"; "room.json" -> "room".
std::string scene_key(const fs::path& p) {
  std::string name = p.filename().string();
  for (const std::string suffix : {".layout.json", ".json"}) {
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return name.substr(0, name.size() - suffix.size());
    }
  }
  return name;
}

}  // namespace

int run_evaluate(const EvaluateArgs& args, const Common&) {
  require_file(args.layout, "layout");
  require_file(args.ontology, "ontology");
  if (!args.condition.empty()) require_file(args.condition, "condition");
  if (!args.params.empty()) require_file(args.params, "params overlay");

  const EvalParams params = params_from(args.params);
  const Ontology ontology = load_ontology(args.ontology);
  const SceneLayout layout = load_layout(args.layout, anchor_from(args.anchor));
  std::optional<PlacementCondition> condition;
  if (!args.condition.empty()) condition = load_condition(args.condition);

  const AssessmentReport report = evaluate(layout, condition ? &*condition : nullptr, ontology, params);
  if (args.format == "text") {
    emit(args.out, render_text(report));
  } else if (args.format == "csv") {
    const ScoreRow row{scene_key(args.layout), report.scores, std::nullopt};
    emit(args.out, render_csv(std::span(&row, 1)));
  } else {
    emit(args.out, report_to_json(report));
  }
  return 0;
}

int run_batch(const BatchArgs& args, const Common& common) {
  require_file(args.ontology, "ontology");
  if (!args.params.empty()) require_file(args.params, "params overlay");
  std::vector<fs::path> files;
  for (const std::string& pattern : args.layouts) {
    const auto matched = expand_glob(pattern);
    if (matched.empty()) throw IoError("no layouts match: " + pattern);
    files.insert(files.end(), matched.begin(), matched.end());
  }
  const EvalParams params = params_from(args.params);
  const Ontology ontology = load_ontology(args.ontology);

  std::vector<std::optional<AssessmentReport>> reports(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), jobs_of(common), [&](std::size_t i) {
    try {
      const SceneLayout layout = load_layout(files[i], anchor_from(args.anchor));
      const fs::path cond = files[i].parent_path() / (scene_key(files[i]) + ".condition.json");
      std::optional<PlacementCondition> condition;
      if (fs::exists(cond)) condition = load_condition(cond);
      reports[i] = evaluate(layout, condition ? &*condition : nullptr, ontology, params);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  int status = 0;
  std::vector<ScoreRow> rows;
  std::string jsonl;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!reports[i]) {
      std::cerr << "scenelint: " << files[i].string() << ": " << errors[i] << "\n";
      status = 1;
      continue;
    }
    const std::string key = scene_key(files[i]);
    rows.push_back({key, reports[i]->scores, std::nullopt});
    nlohmann::ordered_json line;
    line["scene"] = key;
    line["report"] = nlohmann::ordered_json::parse(report_to_json(*reports[i]));
    jsonl += line.dump() + "\n";
  }
  emit(args.out, args.format == "jsonl" ? jsonl : render_csv(rows));
  return status;
}

int run_build(const BuildArgs& args, const Common& common) {
  if (!args.config.empty()) require_file(args.config, "builder config");
  if (!args.relations.empty()) require_file(args.relations, "relation triples");
  if (!args.support_filter.empty()) require_file(args.support_filter, "support filter config");
  std::vector<fs::path> files;
  for (const std::string& pattern : args.corpus) {
    const auto matched = expand_glob(pattern);
    if (matched.empty()) throw IoError("no corpus files match: " + pattern);
    files.insert(files.end(), matched.begin(), matched.end());
  }
  BuildOptions options;
  if (!args.config.empty()) options.config = load_builder_config(args.config);
  if (!args.relations.empty()) options.support_triples = parse_relation_triples(read_text_file(args.relations));
  if (!args.support_filter.empty()) {
    options.support_filter = parse_support_filter_config(read_text_file(args.support_filter));
  }
  options.jobs = jobs_of(common);
  options.shards = args.shards == 0 ? options.jobs : args.shards;

  const BuildResult result = build_ontology(files, options);
  for (const std::string& e : result.errors) std::cerr << "scenelint: skipped " << e << "\n";
  save_ontology(result.ontology, args.out);
  if (common.verbosity >= 0) {
    std::cerr << "scenelint: " << result.scenes << " scenes, " << result.ontology.categories.size()
              << " categories, " << result.errors.size() << " skipped -> " << args.out << "\n";
  }
  return 0;
}

int run_stats(const StatsArgs& args, const Common&) {
  require_file(args.ontology, "ontology");
  emit(args.out, summarize_ontology(load_ontology(args.ontology)));
  return 0;
}

int run_tune(const TuneArgs& args, const Common& common) {
  require_dir(args.corpus, "reference corpus");
  require_file(args.ontology, "ontology");
  require_file(args.grid, "grid");
  const ParamGrid grid = load_grid(args.grid);
  const Ontology ontology = load_ontology(args.ontology);
  const std::vector<ReferenceScene> scenes = load_reference_corpus(args.corpus);

  SweepOptions options;
  options.metric = args.metric;
  options.jobs = jobs_of(common);
  if (args.tie_rule == "perfect") options.tie_rule = TieRule::perfect;

  const SweepResult result = sweep(scenes, ontology, grid, options);
  if (common.verbosity >= 0) {
    for (const std::string& s : result.skipped) std::cerr << "scenelint: skipped combo " << s << "\n";
  }
  for (const std::string& e : result.errors) std::cerr << "scenelint: " << e << "\n";
  for (const std::string& w : result.warnings) std::cerr << "scenelint: warning: " << w << "\n";
  emit(args.out, render_sweep_csv(result));

  if (args.select) {
    const Selection sel = select_combo(result, {args.band_lo, args.band_hi});
    const std::string overlay = selection_overlay(result, sel);
    if (!args.overlay_out.empty()) write_text_file(args.overlay_out, overlay);
    // Keep stdout clean for the CSV when it goes there.
    if (args.out.empty() || args.out == "-") {
      std::cerr << overlay;
    } else {
      std::cout << overlay;
    }
  }
  return 0;
}

int run_refine(const RefineArgs& args, const Common& common) {
  require_file(args.condition, "condition");
  require_file(args.ontology, "ontology");
  if (!args.initial.empty()) require_file(args.initial, "initial layout");
  if (!args.params.empty()) require_file(args.params, "params overlay");
  for (const std::string& img : args.images) require_file(img, "image");
  if (!args.stub_dir.empty()) require_dir(args.stub_dir, "stub directory");

  const EvalParams params = params_from(args.params);
  const Ontology ontology = load_ontology(args.ontology);
  const PlacementCondition condition = load_condition(args.condition);

  ScriptedFixer::Options gen_options;
  gen_options.room_type = args.room_type;
  if (!args.initial.empty()) gen_options.initial = load_layout(args.initial);
  ScriptedFixer generator(ontology, gen_options);

  std::optional<GatewayClient> client;
  std::unique_ptr<Critic> critic;
  if (args.critic == "model") {
    GatewayConfig cfg = gateway_config_from_env();
    if (!args.stub_dir.empty()) cfg.stub_dir = args.stub_dir;
    client.emplace(cfg);
    std::vector<fs::path> images(args.images.begin(), args.images.end());
    critic = std::make_unique<ModelCritic>(*client, critic_modality_from_string(args.modality), &ontology,
                                           std::move(images));
  } else {
    critic = std::make_unique<HeuristicCritic>(params);
  }

  const Trajectory t = refine_loop(generator, *critic, condition, ontology, params,
                                   {args.max_iters, args.stop_reward});
  emit(args.out, trajectory_to_jsonl(t));
  if (!args.csv.empty()) write_text_file(args.csv, render_csv(trajectory_rows(t), "step"));

  const TrajectoryStep& last = t.steps.back();
  if (last.failed) {
    std::cerr << "scenelint: step " << last.step << " failed: " << last.error << "\n";
    return 1;
  }
  if (common.verbosity >= 0 && last.feedback) {
    std::cerr << "scenelint: " << t.steps.size() << " steps, final reward " << last.feedback->reward << "\n";
  }
  return 0;
}

}  // namespace scenelint::cli

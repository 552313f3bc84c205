#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "scenelint/errors.hpp"

using namespace scenelint;

int main(int argc, char** argv) {
  CLI::App app{"scenelint: rule-based verifiers for indoor scene layouts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "scenelint 0.3.0");

  cli::Common common;
  bool quiet = false;
  bool verbose = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress messages");
  app.add_flag("-v,--verbose", verbose, "Print extra diagnostics");
  app.add_option("-j,--jobs", common.jobs, "Worker threads for batch work (default: all cores)");

  cli::EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score one layout and report every verdict");
  evaluate->add_option("--layout", ev.layout, "Layout JSON")->required();
  evaluate->add_option("--ontology", ev.ontology, "Ontology JSON")->required();
  evaluate->add_option("--condition", ev.condition,
                       "Placement condition JSON; without it completeness is skipped and the semantic score "
                       "averages scale and co-occurrence");
  evaluate->add_option("--params", ev.params, "EvalParams overlay JSON merged over the defaults");
  evaluate->add_option("--format", ev.format, "Output format")->check(CLI::IsMember({"json", "text", "csv"}));
  evaluate->add_option("--out", ev.out, "Output file (default: stdout)");
  evaluate->add_option("--anchor", ev.anchor, "How cx/cy are read: center or min_corner (x + w/2, y + h/2)")
      ->check(CLI::IsMember({"center", "min_corner"}));

  cli::BatchArgs ba;
  auto* batch = app.add_subcommand("batch-evaluate", "Score many layouts; <stem>.condition.json siblings are used");
  batch->add_option("--layouts", ba.layouts, "Layout file globs")->required();
  batch->add_option("--ontology", ba.ontology, "Ontology JSON")->required();
  batch->add_option("--params", ba.params, "EvalParams overlay JSON");
  batch->add_option("--format", ba.format, "csv (one row per scene) or jsonl (one report per line)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  batch->add_option("--out", ba.out, "Output file (default: stdout)");
  batch->add_option("--anchor", ba.anchor, "center or min_corner")->check(CLI::IsMember({"center", "min_corner"}));

  cli::BuildArgs bu;
  auto* build = app.add_subcommand("build-ontology", "Aggregate an ontology from a JSONL scene corpus");
  build->add_option("--corpus", bu.corpus, "Corpus JSONL globs")->required();
  build->add_option("--config", bu.config, "Builder config JSON");
  build->add_option("--out", bu.out, "Ontology JSON to write")->required();
  build->add_option("--relations", bu.relations, "Relation-triple JSONL contributing support observations");
  build->add_option("--support-filter", bu.support_filter, "Support predicate filter config JSON");
  build->add_option("--shards", bu.shards, "Corpus partitions (default: --jobs); output does not depend on it");

  cli::StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Write plot-ready ontology summary CSV");
  stats->add_option("--ontology", st.ontology, "Ontology JSON")->required();
  stats->add_option("--out", st.out, "CSV file (default: stdout)");

  cli::TuneArgs tu;
  auto* tune = app.add_subcommand("tune", "Sweep a parameter grid over reference scenes");
  tune->add_option("--corpus", tu.corpus, "Directory of *.layout.json (+ *.condition.json)")->required();
  tune->add_option("--ontology", tu.ontology, "Ontology JSON")->required();
  tune->add_option("--grid", tu.grid, "Grid JSON")->required();
  tune->add_option("--out", tu.out, "Results CSV (default: stdout)");
  tune->add_flag("--select", tu.select, "Print the selected combo as an EvalParams overlay");
  tune->add_option("--band-lo", tu.band_lo, "Lower cumulative leniency percentile of the selection band");
  tune->add_option("--band-hi", tu.band_hi, "Upper cumulative leniency percentile of the selection band");
  tune->add_option("--metric", tu.metric, "Score compared across combos")
      ->check(CLI::IsMember(
          {"avg", "semantic", "orient", "overlap", "prox_overlap", "true_overlap", "scale", "cooccur", "complete"}));
  tune->add_option("--tie-rule", tu.tie_rule, "argmax (credit every combo at the scene maximum) or perfect (score 1)")
      ->check(CLI::IsMember({"argmax", "perfect"}));
  tune->add_option("--overlay-out", tu.overlay_out, "Also write the selected overlay to this file");

  cli::RefineArgs re;
  auto* refine = app.add_subcommand("refine", "Run a critic-driven refinement loop and record the trajectory");
  refine->add_option("--condition", re.condition, "Placement condition JSON")->required();
  refine->add_option("--ontology", re.ontology, "Ontology JSON")->required();
  refine->add_option("--critic", re.critic, "heuristic or model")->check(CLI::IsMember({"heuristic", "model"}));
  refine->add_option("--modality", re.modality, "Model critic input")
      ->check(CLI::IsMember({"text", "image", "image+text", "semantics+text"}));
  refine->add_option("--image", re.images, "Pre-rendered view for image modalities (repeatable)");
  refine->add_option("--stub-dir", re.stub_dir, "Replay canned model responses from this directory");
  refine->add_option("--max-iters", re.max_iters, "Revisions after the initial layout")
      ->check(CLI::PositiveNumber);
  refine->add_option("--stop-reward", re.stop_reward, "Stop once the critic reward reaches this value")
      ->check(CLI::Range(0.0, 1.0));
  refine->add_option("--out", re.out, "Trajectory JSONL (default: stdout)");
  refine->add_option("--csv", re.csv, "Also write per-step scores as CSV");
  refine->add_option("--initial", re.initial, "Starting layout (default: one row of required objects)");
  refine->add_option("--params", re.params, "EvalParams overlay JSON");
  refine->add_option("--room-type", re.room_type, "Room type recorded on generated layouts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  common.verbosity = quiet ? -1 : (verbose ? 1 : 0);

  try {
    if (*evaluate) return cli::run_evaluate(ev, common);
    if (*batch) return cli::run_batch(ba, common);
    if (*build) return cli::run_build(bu, common);
    if (*stats) return cli::run_stats(st, common);
    if (*tune) return cli::run_tune(tu, common);
    if (*refine) return cli::run_refine(re, common);
  } catch (const IoError& e) {
    std::cerr << "scenelint: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "scenelint: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "scenelint/scenelint.hpp"

using namespace scenelint;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

/// Runs the CLI with `args` (already shell-quoted where needed).
Run cli(const fixtures::TempDir& dir, const std::string& args) {
  const auto out = dir.path() / "stdout.txt";
  const auto err = dir.path() / "stderr.txt";
  const std::string cmd =
      quote(SCENELINT_CLI_PATH) + " " + args + " > " + quote(out.string()) + " 2> " + quote(err.string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

SceneLayout bedroom() {
  SceneLayout l;
  l.range = {0, 0, 6, 5};
  l.room_type = "bedroom";
  l.objects = {{"bed", 3, 1.1, 1.6, 2.0, 90, std::nullopt},
               {"nightstand", 1.8, 0.3, 0.5, 0.4, 90, std::nullopt},
               {"lamp", 1.8, 0.3, 0.3, 0.3, 0, std::nullopt}};
  return l;
}

PlacementCondition inventory() {
  PlacementCondition c;
  c.range = {0, 0, 6, 5};
  c.required_objects = {{"bed", 1}, {"nightstand", 2}};
  return c;
}

struct Workspace {
  fixtures::TempDir dir;
  std::string ontology;
  std::string layout;
  std::string condition;

  Workspace() {
    ontology = (dir.path() / "ontology.json").string();
    save_ontology(fixtures::ontology(), ontology);
    layout = (dir.path() / "room.layout.json").string();
    save_layout(bedroom(), layout);
    condition = dir.write("room.condition.json", serialize_condition(inventory())).string();
  }
  std::string path(const std::string& name) const { return (dir.path() / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("version and usage errors") {
    Workspace ws;
    Run r = cli(ws.dir, "--version");
    CHECK(r.code == 0);
    CHECK(r.out.find("scenelint 0.3.0") != std::string::npos);
    CHECK(cli(ws.dir, "").code == 1);
    CHECK(cli(ws.dir, "evaluate --layout x").code == 1);
    CHECK(cli(ws.dir, "evaluate --bogus 1").code == 1);
    CHECK(cli(ws.dir, "frobnicate").code == 1);
    CHECK(cli(ws.dir, "--help").code == 0);
  }

  TEST_CASE("evaluate matches the library report") {
    Workspace ws;
    const AssessmentReport expected = evaluate(bedroom(), nullptr, fixtures::ontology(), {});
    Run r = cli(ws.dir, "evaluate --layout " + quote(ws.layout) + " --ontology " + quote(ws.ontology));
    CHECK(r.code == 0);
    CHECK(report_from_json(r.out) == expected);

    const PlacementCondition inv = inventory();
    const AssessmentReport with_condition = evaluate(bedroom(), &inv, fixtures::ontology(), {});
    r = cli(ws.dir, "evaluate --layout " + quote(ws.layout) + " --ontology " + quote(ws.ontology) + " --condition " +
                        quote(ws.condition) + " --format csv");
    CHECK(r.code == 0);
    const ScoreRow row{"room", with_condition.scores, std::nullopt};
    CHECK(r.out == render_csv(std::span(&row, 1)));

    r = cli(ws.dir, "evaluate --layout " + quote(ws.layout) + " --ontology " + quote(ws.ontology) +
                        " --format text --out " + quote(ws.path("report.txt")));
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(ws.path("report.txt")) == render_text(expected));
  }

  TEST_CASE("evaluate params overlay and anchors") {
    Workspace ws;
    const auto overlay = ws.dir.write("p.json", R"({"overlap_tolerance": 0.5})");
    EvalParams p;
    p.overlap_tolerance = 0.5;
    Run r = cli(ws.dir, "evaluate --layout " + quote(ws.layout) + " --ontology " + quote(ws.ontology) + " --params " +
                            quote(overlay.string()));
    CHECK(r.code == 0);
    CHECK(report_from_json(r.out) == evaluate(bedroom(), nullptr, fixtures::ontology(), p));

    r = cli(ws.dir, "evaluate --layout " + quote(ws.layout) + " --ontology " + quote(ws.ontology) +
                        " --anchor min_corner");
    CHECK(r.code == 0);
    CHECK(report_from_json(r.out) ==
          evaluate(load_layout(ws.layout, PositionAnchor::min_corner), nullptr, fixtures::ontology(), {}));
  }

  TEST_CASE("evaluate error exit codes") {
    Workspace ws;
    Run r = cli(ws.dir, "evaluate --layout " + quote(ws.path("missing.json")) + " --ontology " + quote(ws.ontology));
    CHECK(r.code == 2);
    CHECK(r.err.find("layout not found") != std::string::npos);

    const auto bad = ws.dir.write("bad.layout.json",
                                  R"({"range": {"x_min": 0, "y_min": 0, "x_max": 4, "y_max": 4},
                                      "objects": [{"label": "bed", "cx": 1, "cy": 1, "w": -1, "h": 1}]})");
    r = cli(ws.dir, "evaluate --layout " + quote(bad.string()) + " --ontology " + quote(ws.ontology));
    CHECK(r.code == 1);
    CHECK(r.err.find("objects[0].w") != std::string::npos);

    const auto broken = ws.dir.write("broken.json", "{");
    r = cli(ws.dir, "evaluate --layout " + quote(broken.string()) + " --ontology " + quote(ws.ontology));
    CHECK(r.code == 1);

    const auto overlay = ws.dir.write("p.json", R"({"soft_angle": 500})");
    r = cli(ws.dir, "evaluate --layout " + quote(ws.layout) + " --ontology " + quote(ws.ontology) + " --params " +
                        quote(overlay.string()));
    CHECK(r.code == 1);
    CHECK(r.err.find("soft_angle") != std::string::npos);
  }

  TEST_CASE("batch-evaluate uses sibling conditions") {
    Workspace ws;
    save_layout(bedroom(), ws.path("other.layout.json"));
    Run r = cli(ws.dir, "-j 2 batch-evaluate --layouts " + quote(ws.path("*.layout.json")) + " --ontology " +
                            quote(ws.ontology));
    CHECK(r.code == 0);
    const PlacementCondition inv = inventory();
    const AssessmentReport room = evaluate(bedroom(), &inv, fixtures::ontology(), {});
    const AssessmentReport other = evaluate(bedroom(), nullptr, fixtures::ontology(), {});
    const std::vector<ScoreRow> rows = {{"other", other.scores, std::nullopt}, {"room", room.scores, std::nullopt}};
    CHECK(r.out == render_csv(rows));

    r = cli(ws.dir, "batch-evaluate --format jsonl --layouts " + quote(ws.path("*.layout.json")) + " --ontology " +
                        quote(ws.ontology));
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
    CHECK(r.out.rfind("{\"scene\":\"other\",\"report\":", 0) == 0);

    CHECK(cli(ws.dir, "batch-evaluate --layouts " + quote(ws.path("nothing*.json")) + " --ontology " +
                          quote(ws.ontology))
              .code == 2);
    ws.dir.write("zbad.layout.json", "{");
    r = cli(ws.dir, "batch-evaluate --layouts " + quote(ws.path("*.layout.json")) + " --ontology " + quote(ws.ontology));
    CHECK(r.code == 1);
    CHECK(r.err.find("zbad.layout.json") != std::string::npos);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
  }

  TEST_CASE("build-ontology and stats") {
    Workspace ws;
    std::mt19937_64 rng(21);
    const auto scenes = fixtures::synthetic_corpus(rng, 30);
    std::string a, b;
    for (std::size_t i = 0; i < scenes.size(); ++i) (i < 15 ? a : b) += serialize_corpus_scene(scenes[i]) + "\n";
    b += "{\"scene_id\": \"broken\"}\n";
    ws.dir.write("corpus/a.jsonl", a);
    ws.dir.write("corpus/b.jsonl", b);

    Run r = cli(ws.dir, "-j 3 build-ontology --corpus " + quote(ws.path("corpus/*.jsonl")) + " --out " +
                            quote(ws.path("built.json")) + " --shards 5");
    CHECK(r.code == 0);
    CHECK(r.err.find("skipped b.jsonl:16: broken: ") != std::string::npos);
    CHECK(r.err.find("30 scenes") != std::string::npos);
    const std::string first = slurp(ws.path("built.json"));

    r = cli(ws.dir, "-q build-ontology --corpus " + quote(ws.path("corpus/a.jsonl")) + " --corpus " +
                        quote(ws.path("corpus/b.jsonl")) + " --out " + quote(ws.path("built1.json")) + " --shards 1");
    CHECK(r.code == 0);
    CHECK(r.err.find("30 scenes") == std::string::npos);
    CHECK(slurp(ws.path("built1.json")) == first);

    BuildOptions opt;
    const std::vector<std::filesystem::path> files = {ws.path("corpus/a.jsonl"), ws.path("corpus/b.jsonl")};
    CHECK(load_ontology(ws.path("built.json")) == build_ontology(std::span<const std::filesystem::path>(files), opt).ontology);

    r = cli(ws.dir, "stats --ontology " + quote(ws.path("built.json")));
    CHECK(r.code == 0);
    CHECK(r.out == summarize_ontology(load_ontology(ws.path("built.json"))));

    ws.dir.write("cfg.json", R"({"cooccur_cap": 99})");
    r = cli(ws.dir, "build-ontology --corpus " + quote(ws.path("corpus/*.jsonl")) + " --out " +
                        quote(ws.path("x.json")) + " --config " + quote(ws.path("cfg.json")));
    CHECK(r.code == 1);
    CHECK(cli(ws.dir, "build-ontology --corpus " + quote(ws.path("none/*.jsonl")) + " --out " + quote(ws.path("x.json")))
              .code == 2);
    CHECK(cli(ws.dir, "stats --ontology " + quote(ws.path("none.json"))).code == 2);
  }

  TEST_CASE("tune writes counts and the selected overlay") {
    Workspace ws;
    std::filesystem::create_directories(ws.path("ref"));
    for (const ReferenceScene& s : fixtures::hand_count_corpus()) save_layout(s.layout, ws.path("ref/" + s.id + ".layout.json"));
    ws.dir.write("grid.json", fixtures::hand_count_grid());
    Run r = cli(ws.dir, "tune --corpus " + quote(ws.path("ref")) + " --ontology " + quote(ws.ontology) + " --grid " +
                            quote(ws.path("grid.json")) + " --select --overlay-out " + quote(ws.path("chosen.json")));
    CHECK(r.code == 0);
    const auto scenes = fixtures::hand_count_corpus();
    CHECK(r.out == render_sweep_csv(sweep(std::span<const ReferenceScene>(scenes), fixtures::ontology(),
                                          parse_grid(fixtures::hand_count_grid()))));
    CHECK(r.err.find("\"overlap_tolerance\": 0.3") != std::string::npos);
    const EvalParams chosen = load_params_overlay(ws.path("chosen.json"));
    CHECK(chosen.overlap_tolerance == 0.3);
    CHECK(chosen.soft_angle == 60.0);

    r = cli(ws.dir, "tune --corpus " + quote(ws.path("ref")) + " --ontology " + quote(ws.ontology) + " --grid " +
                        quote(ws.path("grid.json")) + " --select --band-lo 0.01 --band-hi 0.02");
    CHECK(r.code == 1);
    CHECK(r.err.find("widen the band") != std::string::npos);
    CHECK(cli(ws.dir, "tune --corpus " + quote(ws.path("nope")) + " --ontology " + quote(ws.ontology) + " --grid " +
                          quote(ws.path("grid.json")))
              .code == 2);
    CHECK(cli(ws.dir, "tune --corpus " + quote(ws.path("ref")) + " --ontology " + quote(ws.ontology) + " --grid " +
                          quote(ws.path("grid.json")) + " --metric median")
              .code == 1);
  }

  TEST_CASE("refine with the heuristic critic") {
    Workspace ws;
    const fixtures::RefineFixture f = fixtures::refinement_fixture(6);
    ws.dir.write("c.json", serialize_condition(f.condition));
    save_layout(f.initial, ws.path("start.json"));
    Run r = cli(ws.dir, "refine --condition " + quote(ws.path("c.json")) + " --ontology " + quote(ws.ontology) +
                            " --initial " + quote(ws.path("start.json")) + " --csv " + quote(ws.path("steps.csv")));
    CHECK(r.code == 0);
    CHECK(r.err.find("final reward 1") != std::string::npos);
    const auto lines = std::count(r.out.begin(), r.out.end(), '\n');
    CHECK(lines >= 2);
    const std::string csv = slurp(ws.path("steps.csv"));
    CHECK(csv.rfind("step,Sem,Ori,ProxOvlp,TrueOvlp,Avg,reward\n0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == lines + 1);
  }

  TEST_CASE("refine with a replayed model critic") {
    Workspace ws;
    ws.dir.write("stubs/01.txt", R"({"reward": 0.4, "notes": [{"label": "nightstand", "issue": "missing"}]})");
    ws.dir.write("stubs/02.txt", R"({"reward": 1.0, "notes": []})");
    Run r = cli(ws.dir, "refine --critic model --stub-dir " + quote(ws.path("stubs")) + " --condition " +
                            quote(ws.condition) + " --ontology " + quote(ws.ontology) + " --out " +
                            quote(ws.path("t.jsonl")));
    CHECK(r.code == 0);
    const std::string t = slurp(ws.path("t.jsonl"));
    CHECK(std::count(t.begin(), t.end(), '\n') == 2);

    ws.dir.write("bad/01.txt", "I cannot help with that.");
    r = cli(ws.dir, "refine --critic model --stub-dir " + quote(ws.path("bad")) + " --condition " + quote(ws.condition) +
                        " --ontology " + quote(ws.ontology));
    CHECK(r.code == 1);
    CHECK(r.err.find("step 0 failed: critic failed: critic response holds no JSON object") != std::string::npos);

    r = cli(ws.dir, "refine --critic model --modality image --stub-dir " + quote(ws.path("stubs")) + " --condition " +
                        quote(ws.condition) + " --ontology " + quote(ws.ontology));
    CHECK(r.code == 1);
    CHECK(cli(ws.dir, "refine --condition " + quote(ws.path("none.json")) + " --ontology " + quote(ws.ontology)).code ==
          2);
    CHECK(cli(ws.dir, "refine --condition " + quote(ws.condition) + " --ontology " + quote(ws.ontology) +
                          " --max-iters 0")
              .code == 1);
  }
}

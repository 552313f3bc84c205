// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "properties.hpp"
#include "reference.hpp"
#include "scenelint/scenelint.hpp"

using namespace scenelint;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Collects the first few failure messages for the criterion line.
class Checker {
 public:
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void absorb(const std::vector<std::string>& failures) {
    for (const std::string& f : failures) expect(false, f);
  }
  Outcome done(std::string summary) const {
    if (failures_ == 0) return {true, std::move(summary)};
    return {false, std::to_string(failures_) + " failure(s): " + notes_};
  }

 private:
  std::size_t failures_ = 0;
  std::string notes_;
};

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

Outcome aggregation_identity() {
  struct Row {
    const char* name;
    double sem, ori, prox, true_ovlp, avg;
  };
  const Row rows[] = {
      {"holodeck-qwen72b", 76.62, 52.75, 95.97, 95.99, 75.12},
      {"layoutgpt-qwen72b", 75.03, 16.83, 73.54, 73.34, 55.10},
      {"layoutvlm-qwen72b", 89.46, 59.38, 91.92, 92.31, 80.32},
      {"holodeck-gemini", 74.37, 45.05, 97.13, 97.21, 72.20},
      {"layoutgpt-gemini", 74.70, 37.52, 76.99, 77.79, 63.20},
      {"layoutvlm-gemini", 89.27, 58.65, 92.45, 91.47, 79.96},
  };
  Checker c;
  double worst = 0.0;
  for (const Row& r : rows) {
    const double avg = 100.0 * average_score(r.sem / 100, r.ori / 100, r.prox / 100, r.true_ovlp / 100);
    worst = std::max(worst, std::abs(avg - r.avg));
    c.expect(std::abs(avg - r.avg) <= 0.01, std::string(r.name) + " gives " + num(avg));
  }
  return c.done("6 rows, max |diff| " + num(worst));
}

Outcome sat_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> ext(0.1, 3.0);
  std::uniform_real_distribution<double> yaw(0.0, 360.0);
  Checker c;
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const double ax = pos(rng), ay = pos(rng), aw = ext(rng), ah = ext(rng), ayaw = yaw(rng);
    const double bx = pos(rng), by = pos(rng), bw = ext(rng), bh = ext(rng), byaw = yaw(rng);
    const bool sat = sat_penetration({{ax, ay}, {aw / 2, ah / 2}, ayaw}, {{bx, by}, {bw / 2, bh / 2}, byaw}) > 0.0;
    const double area = reference::convex_intersection_area(reference::box_polygon(ax, ay, aw, ah, ayaw),
                                                            reference::box_polygon(bx, by, bw, bh, byaw));
    c.expect(sat == (area > 1e-12), "pair " + std::to_string(i) + " disagrees (area " + num(area) + ")");
    hits += sat ? 1 : 0;
  }
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Obb a{{pos(rng), pos(rng)}, {ext(rng) / 2, ext(rng) / 2}, 0.0};
    const Obb b{{pos(rng), pos(rng)}, {ext(rng) / 2, ext(rng) / 2}, 0.0};
    const double gap = std::abs(sat_penetration(a, b) - aabb_overlap_amount(aabb_of(a), aabb_of(b)));
    worst = std::max(worst, gap);
    c.expect(gap <= 1e-9, "yaw-0 pair " + std::to_string(i) + " differs by " + num(gap));
  }
  return c.done("10000 rotated pairs (" + std::to_string(hits) + " intersecting), 10000 yaw-0 pairs, max gap " +
                num(worst));
}

Outcome verifier_oracles() {
  std::mt19937_64 rng(77);
  EvalParams variants[3];
  variants[1].weak_pair_policy = WeakPairPolicy::exclude;
  variants[2].soft_angle = 45;
  variants[2].hard_angle = 90;
  variants[2].overlap_tolerance = 0.05;
  Checker c;
  for (int i = 0; i < 500; ++i) {
    const SceneLayout l = fixtures::random_layout(rng, 6);
    const PlacementCondition cond = fixtures::random_condition(rng, l);
    const PlacementCondition* cp = i % 2 ? &cond : nullptr;
    const EvalParams& p = variants[i % 3];
    const Scores s = evaluate(l, cp, fixtures::ontology(), p).scores;
    const reference::Scores r = reference::score(l, cp, fixtures::ontology(), p);
    const std::string id = "scene " + std::to_string(i) + ": ";
    c.expect(s.scale == r.scale, id + "scale");
    c.expect(s.cooccur == r.cooccur, id + "cooccur");
    c.expect(s.complete == r.complete, id + "complete");
    c.expect(s.orient == r.orient, id + "orient");
    c.expect(s.prox_overlap == r.prox_overlap, id + "prox_overlap");
    c.expect(s.true_overlap == r.true_overlap, id + "true_overlap");
  }
  return c.done("500 scenes, 6 scores each, exact");
}

Outcome invariance_and_monotonicity() {
  Checker c;
  c.absorb(properties::invariance_failures(404, 100));
  c.absorb(properties::monotonicity_failures(405, 100));
  return c.done("100 scenes x {permutation, rotation, quarter turn, mirror}; 5 ladders x 5 points on 100 scenes");
}

CorpusObject box(const char* category, double x, double y, double w, double h, double d) {
  CorpusObject o;
  o.category = category;
  o.center = {x, y, d / 2.0};
  o.extents = {w, h, d};
  return o;
}

CorpusScene bare_room(const std::string& id, std::vector<CorpusObject> objects) {
  CorpusScene s;
  s.scene_id = id;
  s.floor_polygon = rect_polygon({0, 0, 4, 4});
  s.objects = std::move(objects);
  return s;
}

const CooccurEdge* edge(const Ontology& o, const char* a, const char* b) {
  const CategoryEntry* e = o.find(a);
  return e ? e->find_edge(b) : nullptr;
}

Outcome ontology_determinism() {
  Checker c;
  std::mt19937_64 rng(50);
  const std::vector<CorpusScene> scenes = fixtures::synthetic_corpus(rng, 50);
  std::vector<std::string> outputs;
  for (std::size_t shards : {1, 2, 8}) {
    BuildOptions opt;
    opt.shards = shards;
    opt.jobs = shards == 1 ? 1 : 4;
    outputs.push_back(serialize_ontology(build_ontology(std::span<const CorpusScene>(scenes), opt).ontology));
  }
  c.expect(outputs[0] == outputs[1], "2 shards differ from 1");
  c.expect(outputs[0] == outputs[2], "8 shards differ from 1");

  const Ontology built = parse_ontology(outputs[0]);
  std::size_t edges = 0;
  for (const auto& [name, entry] : built.categories) {
    auto scan = [&](const CooccurList& list) {
      for (const auto& [other, e] : list) {
        ++edges;
        c.expect(e.npmi >= -1.0 && e.npmi <= 1.0, name + "/" + other + " nPMI " + num(e.npmi));
      }
    };
    scan(entry.cooccurrence);
    for (const auto& [room, list] : entry.cooccurrence_by_room) scan(list);
  }
  c.expect(edges > 0, "no edges built");

  std::vector<CorpusScene> perfect;
  for (int i = 0; i < 3; ++i) {
    perfect.push_back(bare_room("p" + std::to_string(i), {box("bed", 1, 1, 1, 2, 0.5), box("nightstand", 2, 1, 0.5, 0.5, 0.5)}));
  }
  const Ontology po = build_ontology(std::span<const CorpusScene>(perfect), {}).ontology;
  const CooccurEdge* pe = edge(po, "bed", "nightstand");
  c.expect(pe && pe->npmi == 1.0, "perfect fixture nPMI " + (pe ? num(pe->npmi) : std::string("missing")));

  const std::vector<CorpusScene> independent = {
      bare_room("i0", {box("a", 1, 1, 0.5, 0.5, 0.5), box("b", 2, 1, 0.5, 0.5, 0.5)}),
      bare_room("i1", {box("a", 1, 1, 0.5, 0.5, 0.5)}),
      bare_room("i2", {box("b", 1, 1, 0.5, 0.5, 0.5)}),
      bare_room("i3", {}),
  };
  const Ontology io = build_ontology(std::span<const CorpusScene>(independent), {}).ontology;
  const CooccurEdge* ie = edge(io, "a", "b");
  c.expect(ie && std::abs(ie->npmi) < 1e-9, "independence fixture nPMI " + (ie ? num(ie->npmi) : std::string("missing")));
  return c.done("1/2/8 shards identical, " + std::to_string(edges) + " edges in range, fixtures exact");
}

Outcome tuning_harness() {
  Checker c;
  const auto hand = fixtures::hand_count_corpus();
  const SweepResult r =
      sweep(std::span<const ReferenceScene>(hand), fixtures::ontology(), parse_grid(fixtures::hand_count_grid()));
  const std::map<std::vector<double>, std::int64_t> expected = {
      {{0.1, 30}, 2}, {{0.1, 60}, 6}, {{0.3, 30}, 5}, {{0.3, 60}, 9}, {{0.5, 30}, 5}, {{0.5, 60}, 9}};
  std::map<std::vector<double>, std::int64_t> got;
  for (const ComboResult& cr : r.combos) got[cr.combo.values] = cr.count;
  c.expect(got == expected, "hand-counted sweep counts differ");
  const Selection sel = select_combo(r);
  c.expect(r.combos[sel.index].combo.values == std::vector<double>{0.3, 60}, "hand-counted selection");

  const auto angles = fixtures::angle_band_corpus();
  const SweepResult ar =
      sweep(std::span<const ReferenceScene>(angles), fixtures::ontology(), parse_grid(fixtures::angle_band_grid()));
  const Selection as = select_combo(ar);
  const auto& chosen = ar.combos[as.index].combo.values;
  c.expect(chosen[1] == 2 * chosen[0], "angle selection is (" + num(chosen[0]) + ", " + num(chosen[1]) + ")");
  return c.done("6 combos exact, selected (0.3, 60); angle fixture selected (" + num(chosen[0]) + ", " +
                num(chosen[1]) + ")");
}

Outcome refinement_convergence() {
  Checker c;
  std::size_t total_steps = 0;
  for (int k = 0; k < 20; ++k) {
    const fixtures::RefineFixture f = fixtures::refinement_fixture(k);
    ScriptedFixer::Options opt;
    opt.initial = f.initial;
    ScriptedFixer fixer(fixtures::ontology(), opt);
    HeuristicCritic critic;
    const std::size_t violations = heuristic_critic(f.initial, f.condition, {}).notes.size();
    const std::string id = "fixture " + std::to_string(k) + ": ";
    RefineOptions ro;
    ro.max_iters = std::max<std::size_t>(violations, 1);
    const Trajectory t = refine_loop(fixer, critic, f.condition, fixtures::ontology(), {}, ro);
    total_steps += t.steps.size();
    c.expect(violations > 0, id + "no initial violations");
    c.expect(t.steps.size() - 1 <= violations, id + "took too many steps");
    c.expect(t.steps.back().feedback && t.steps.back().feedback->reward == 1.0, id + "did not reach 1.0");
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      c.expect(!t.steps[i].failed && t.steps[i].feedback.has_value(), id + "step failed");
      c.expect(t.steps[i].report.has_value(), id + "missing report");
      if (i > 0 && t.steps[i].feedback && t.steps[i - 1].feedback) {
        c.expect(t.steps[i].feedback->reward >= t.steps[i - 1].feedback->reward, id + "reward decreased");
      }
    }
  }
  return c.done("20 fixtures, " + std::to_string(total_steps) + " steps");
}

Ontology pair_ontology(double f) {
  Ontology o;
  for (const char* name : {"a", "b"}) {
    CategoryEntry& e = o.categories[name];
    CooccurEdge edge;
    edge.count = 10;
    edge.p_b_given_a = f;
    e.cooccurrence.push_back({name[0] == 'a' ? "b" : "a", edge});
  }
  return o;
}

Outcome cooccur_truth_table() {
  // Defaults: floor 0.01, weak below 0.2, strong from 0.7; strong pairs within
  // 2.0 m, moderate pairs within 3.5 m; weak pairs fail under the fail policy.
  struct Row {
    double f;
    VerdictKind at[3];
  };
  const double distances[3] = {1.5, 3.0, 4.0};
  const VerdictKind P = VerdictKind::pass, F = VerdictKind::fail;
  const Row rows[] = {
      {0.005, {F, F, F}},
      {0.15, {F, F, F}},
      {0.3, {P, P, F}},
      {0.8, {P, F, F}},
  };
  EvalParams p;
  p.weak_pair_policy = WeakPairPolicy::fail;
  Checker c;
  int cells = 0;
  for (const Row& r : rows) {
    const Ontology o = pair_ontology(r.f);
    for (int j = 0; j < 3; ++j) {
      ++cells;
      const std::string id = "f=" + num(r.f) + " d=" + num(distances[j]);
      c.expect(cooccur_pair_verdict(r.f, distances[j], p) == r.at[j], id + " direct");
      SceneLayout l;
      l.range = {0, 0, 6, 5};
      l.objects = {{"a", 1, 1, 0.3, 0.3, 0, std::nullopt}, {"b", 1 + distances[j], 1, 0.3, 0.3, 0, std::nullopt}};
      const CooccurReport rep = verify_cooccurrence(l, o, p);
      const bool one = rep.pairs.size() == 1;
      c.expect(one, id + " expected one pair");
      if (!one) continue;
      c.expect(rep.pairs[0].verdict.kind == r.at[j], id + " end to end");
      c.expect(rep.checked == 1 && rep.score == (r.at[j] == P ? 1.0 : 0.0), id + " score");
    }
  }
  return c.done(std::to_string(cells) + " cells, direct and end to end");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;  // 0 means no limit
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"aggregation identity", 1.0, aggregation_identity},
      {"SAT oracle equivalence", 10.0, sat_oracle},
      {"verifier formula oracles", 10.0, verifier_oracles},
      {"invariance and monotonicity", 0.0, invariance_and_monotonicity},
      {"ontology determinism", 0.0, ontology_determinism},
      {"tuning harness", 0.0, tuning_harness},
      {"refinement convergence", 5.0, refinement_convergence},
      {"co-occurrence verdict table", 0.0, cooccur_truth_table},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& cr : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.ok && cr.limit_s > 0.0 && secs >= cr.limit_s) {
      out = {false, "took " + num(secs) + " s, limit " + num(cr.limit_s) + " s"};
    }
    if (!out.ok) ++failed;
    std::printf("%s %d %s (%.3f s): %s\n", out.ok ? "PASS" : "FAIL", index, cr.name, secs, out.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}

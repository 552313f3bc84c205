#include <limits>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "properties.hpp"
#include "scenelint/verifiers.hpp"

using namespace scenelint;

namespace {

void report(const std::vector<std::string>& failures) {
  for (std::size_t i = 0; i < failures.size() && i < 10; ++i) MESSAGE(failures[i]);
  CHECK(failures.empty());
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("scores survive permutation, rigid motion and mirroring") { report(properties::invariance_failures(5, 60)); }

  TEST_CASE("score gap helper") {
    Scores a, b;
    a.complete = 1.0;
    CHECK(properties::max_score_gap(a, b) == std::numeric_limits<double>::infinity());
    b.complete = 0.5;
    b.prox_overlap = 0.1;
    CHECK(properties::max_score_gap(a, b) == 0.9);
    CHECK(properties::max_score_gap(a, b, true) == 0.5);
  }

  TEST_CASE("loosening a threshold never lowers a score") { report(properties::monotonicity_failures(6, 40)); }

  TEST_CASE("a smaller soft scale margin can lower the scale score") {
    // Both sides sit inside p95 + 0.05 but outside p95 + 0.01, in either footprint order.
    SceneLayout l;
    l.range = {0, 0, 6, 5};
    l.objects = {{"bed", 3, 2, 2.04, 2.24, 0, std::nullopt}};
    EvalParams wide;
    EvalParams narrow;
    narrow.scale_soft_eps = 0.01;
    const double s_wide = evaluate(l, nullptr, fixtures::ontology(), wide).scores.scale;
    const double s_narrow = evaluate(l, nullptr, fixtures::ontology(), narrow).scores.scale;
    CHECK(s_narrow < s_wide);
  }
}

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scenelint/params.hpp"
#include "scenelint/verifiers.hpp"

/// Property checks shared by the unit suites and the acceptance binary. Each
/// returns a description of every violation found; empty means the property held.
namespace properties {

/// Largest absolute difference over every score, counting a present/absent
/// mismatch in `complete` as infinite.
double max_score_gap(const scenelint::Scores& a, const scenelint::Scores& b, bool skip_axis_aligned = false);

/// Object order, rigid motion of scene and walls, and mirroring leave scores
/// unchanged within `tolerance`. Axis-aligned overlap is exempt under
/// non-quarter-turn rotations.
std::vector<std::string> invariance_failures(std::uint64_t seed, int scenes, double tolerance = 1e-9);

struct Ladder {
  std::string param;
  std::vector<double> values;  // ordered from strict to lenient
};

/// Five-point ladders for the soft and hard angle, overlap tolerance, the hard
/// scale factor and the soft scale margin.
std::vector<Ladder> leniency_ladders();

/// No score decreases when a parameter steps along its ladder.
std::vector<std::string> monotonicity_failures(std::uint64_t seed, int scenes);

}  // namespace properties

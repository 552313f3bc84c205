#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenelint/verifiers.hpp"

namespace scenelint {

/// fraction * 100, rounded half-up to 2 decimals, formatted "%.2f".
std::string format_percent(double fraction);

/// One rendered verdict. `object` is a label (suffixed "#index" when the
/// label repeats in the layout) or "a|b" for pair constraints.
struct VerdictLine {
  std::string section;  // semantic | orientation | overlap
  std::string object;
  std::string constraint;
  VerdictKind kind = VerdictKind::pass;
  std::string evidence;
};

/// Every verdict in the report exactly once, grouped by section and sorted
/// by object then constraint.
std::vector<VerdictLine> verdict_lines(const AssessmentReport& report);

std::string report_to_json(const AssessmentReport& report);
AssessmentReport report_from_json(std::string_view json);
void save_report(const AssessmentReport& report, const std::filesystem::path& path);
AssessmentReport load_report(const std::filesystem::path& path);

/// Scores block then one "✓"/"✗" line per verdict.
std::string render_text(const AssessmentReport& report);

struct ScoreRow {
  std::string key;
  Scores scores;
  std::optional<double> reward;
};

/// Header: <key_column>,Sem,Ori,ProxOvlp,TrueOvlp,Avg[,reward]. Values are
/// percentages with 2 decimals; reward stays a fraction.
std::string render_csv(std::span<const ScoreRow> rows, std::string_view key_column = "scene");

std::string csv_escape(std::string_view field);

}  // namespace scenelint

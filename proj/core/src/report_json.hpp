#pragma once

#include "json_util.hpp"
#include "scenelint/verifiers.hpp"

namespace scenelint::detail {

Json report_to_json_value(const AssessmentReport& report);
AssessmentReport report_from_json_value(const Json& doc, const std::string& path = "");

}  // namespace scenelint::detail

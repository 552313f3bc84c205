#pragma once

#include "json_util.hpp"
#include "scenelint/scene.hpp"

namespace scenelint::detail {

SceneLayout layout_from_json(const Json& doc, PositionAnchor anchor, const std::string& path = "");
Json layout_to_json(const SceneLayout& layout);

PlacementCondition condition_from_json(const Json& doc, const std::string& path = "");
Json condition_to_json(const PlacementCondition& condition);

}  // namespace scenelint::detail

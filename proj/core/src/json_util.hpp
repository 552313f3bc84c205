#pragma once

// Private helpers for reading JSON documents with path-qualified errors.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/geometry.hpp"

namespace scenelint::detail {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text, std::string_view what);

std::string join_path(const std::string& parent, std::string_view key);
std::string index_path(const std::string& parent, std::size_t index);

const Json& require(const Json& obj, std::string_view key, const std::string& path);
const Json* find(const Json& obj, std::string_view key);

void expect_object(const Json& value, const std::string& path);
void expect_array(const Json& value, const std::string& path);

double as_number(const Json& value, const std::string& path);
std::int64_t as_int(const Json& value, const std::string& path);
std::string as_string(const Json& value, const std::string& path);
bool as_bool(const Json& value, const std::string& path);

double number_field(const Json& obj, std::string_view key, const std::string& path);
std::int64_t int_field(const Json& obj, std::string_view key, const std::string& path);
std::string string_field(const Json& obj, std::string_view key, const std::string& path);
std::string string_field_or(const Json& obj, std::string_view key, const std::string& path,
                            std::string fallback);

Rect rect_from_json(const Json& value, const std::string& path);
Json rect_to_json(const Rect& rect);

Vec2 point_from_json(const Json& value, const std::string& path);

std::string dump(const Json& doc);

}  // namespace scenelint::detail

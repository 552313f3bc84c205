#include "json_util.hpp"

#include <cmath>

namespace scenelint::detail {

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

std::string join_path(const std::string& parent, std::string_view key) {
  if (parent.empty()) return std::string(key);
  return parent + "." + std::string(key);
}

std::string index_path(const std::string& parent, std::size_t index) {
  return parent + "[" + std::to_string(index) + "]";
}

const Json* find(const Json& obj, std::string_view key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

const Json& require(const Json& obj, std::string_view key, const std::string& path) {
  expect_object(obj, path.empty() ? std::string("<root>") : path);
  const Json* v = find(obj, key);
  if (v == nullptr) {
    throw ParseError(join_path(path, key) + ": required field is missing");
  }
  return *v;
}

void expect_object(const Json& value, const std::string& path) {
  if (!value.is_object()) throw ParseError(path + ": expected an object");
}

void expect_array(const Json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path + ": expected an array");
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path + ": expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ValidationError(path, "must be finite");
  return v;
}

std::int64_t as_int(const Json& value, const std::string& path) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (std::isfinite(v) && std::floor(v) == v) return static_cast<std::int64_t>(v);
  }
  throw ParseError(path + ": expected an integer");
}

std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) throw ParseError(path + ": expected a string");
  return value.get<std::string>();
}

bool as_bool(const Json& value, const std::string& path) {
  if (!value.is_boolean()) throw ParseError(path + ": expected a boolean");
  return value.get<bool>();
}

double number_field(const Json& obj, std::string_view key, const std::string& path) {
  return as_number(require(obj, key, path), join_path(path, key));
}

std::int64_t int_field(const Json& obj, std::string_view key, const std::string& path) {
  return as_int(require(obj, key, path), join_path(path, key));
}

std::string string_field(const Json& obj, std::string_view key, const std::string& path) {
  return as_string(require(obj, key, path), join_path(path, key));
}

std::string string_field_or(const Json& obj, std::string_view key, const std::string& path,
                            std::string fallback) {
  const Json* v = find(obj, key);
  return v == nullptr ? std::move(fallback) : as_string(*v, join_path(path, key));
}

Rect rect_from_json(const Json& value, const std::string& path) {
  expect_object(value, path);
  Rect r;
  r.x_min = number_field(value, "x_min", path);
  r.y_min = number_field(value, "y_min", path);
  r.x_max = number_field(value, "x_max", path);
  r.y_max = number_field(value, "y_max", path);
  if (!(r.x_min < r.x_max)) throw ValidationError(join_path(path, "x_min"), "must be < x_max");
  if (!(r.y_min < r.y_max)) throw ValidationError(join_path(path, "y_min"), "must be < y_max");
  return r;
}

Json rect_to_json(const Rect& rect) {
  Json j = Json::object();
  j["x_min"] = rect.x_min;
  j["y_min"] = rect.y_min;
  j["x_max"] = rect.x_max;
  j["y_max"] = rect.y_max;
  return j;
}

Vec2 point_from_json(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) {
    throw ParseError(path + ": expected a [x, y] pair");
  }
  return {as_number(value[0], index_path(path, 0)), as_number(value[1], index_path(path, 1))};
}

std::string dump(const Json& doc) {
  return doc.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

}  // namespace scenelint::detail

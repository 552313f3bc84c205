#include "scenelint/errors.hpp"

namespace scenelint {

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

}  // namespace scenelint

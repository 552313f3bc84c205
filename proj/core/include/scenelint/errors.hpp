#pragma once

#include <stdexcept>
#include <string>

namespace scenelint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON syntax, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant. `field()` names the
/// offending field as a dotted path into the document.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Filesystem failure (missing file, unwritable destination).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scenelint

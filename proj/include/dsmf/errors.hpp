#pragma once

#include <stdexcept>
#include <string>

namespace dsmf {

// Input violates a documented precondition (bad masses, frame mismatch, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed text: element expressions, BBA files, CSV records, configs.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace dsmf

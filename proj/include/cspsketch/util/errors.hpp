#pragma once

#include <stdexcept>
#include <string>

namespace cspsketch {

// Bad arguments or malformed input (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Predicate outside the family an operation supports (CLI exit code 3).
class UnsupportedPredicateError : public std::runtime_error {
public:
  explicit UnsupportedPredicateError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures (CLI exit code 4).
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cspsketch

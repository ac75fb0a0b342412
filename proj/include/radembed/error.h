#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radembed {

// Shape mismatches and out-of-range hyperparameters. These indicate a bug in
// the caller or a bad configuration, never bad input data.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input files. Carries the 1-based line number when known (0 if not).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Training hit a NaN/Inf loss.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace radembed

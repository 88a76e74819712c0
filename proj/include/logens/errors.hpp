#pragma once

#include <stdexcept>
#include <string>

namespace logens {

// Argument and shape errors are reported with std::invalid_argument and
// std::out_of_range. The types below carry meaning the CLI maps to exit codes.

/// Bad or incomplete run configuration, unreadable input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite cost or weight.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logens

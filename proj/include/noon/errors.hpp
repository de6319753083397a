#pragma once

#include <stdexcept>
#include <string>

namespace noon {

/// Invalid parameters, mismatched spaces, malformed configs. CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical validity guard fired (truncation leakage, lost positivity, ...).
/// CLI maps this to exit code 3.
struct NumericalGuard : std::runtime_error {
  explicit NumericalGuard(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace noon

#pragma once

#include <stdexcept>
#include <string>

namespace mihpo {

/// Bad user input: missing files, malformed configs, empty datasets.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failure: divergence, non-stabilizable plant, non-finite state.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mihpo

#pragma once

#include <stdexcept>
#include <string>

namespace vlab {

// Bad argument to a library call: dimension mismatch, nonpositive radius,
// degenerate frame, malformed file contents.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Unknown registry name or inconsistent scenario description.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vlab

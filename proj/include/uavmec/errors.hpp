#pragma once

#include <stdexcept>
#include <string>

namespace uavmec {

// Bad configuration or malformed input files; the CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uavmec

#pragma once

#include <stdexcept>
#include <string>

namespace extropy {

// Bad user input: wrong grids, malformed configs, invalid arguments. CLI exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime guard tripped: insufficient halo, enumeration too large. CLI exit 3.
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace extropy

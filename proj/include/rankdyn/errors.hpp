#pragma once

#include <stdexcept>
#include <string>

namespace rankdyn {

/// User/configuration mistakes (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input data (CLI exit code 3).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Broken internal invariant, a bug guard (CLI exit code 4).
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace rankdyn

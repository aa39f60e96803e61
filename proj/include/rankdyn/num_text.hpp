#pragma once

#include <charconv>
#include <cstdlib>
#include <string>

#include "rankdyn/errors.hpp"

namespace rankdyn {

/// Shortest decimal form that round-trips exactly to the same double.
inline std::string format_double(double v)
{
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s)
{
    const char* b = s.c_str();
    char* end = nullptr;
    double v = std::strtod(b, &end);
    if (end == b || *end != '\0')
        throw ValidationError("bad numeric value '" + s + "'");
    return v;
}

} // namespace rankdyn

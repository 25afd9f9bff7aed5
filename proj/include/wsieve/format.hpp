#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace wsieve {

/// Round-trip-stable decimal text for CSV output (empty for missing values).
inline std::string fmt_num(double x, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline std::string fmt_num(const std::optional<double>& x, int digits = 15) {
    return x ? fmt_num(*x, digits) : std::string();
}

}  // namespace wsieve

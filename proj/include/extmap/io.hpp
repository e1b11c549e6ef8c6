#pragma once

#include <cstdio>
#include <string>

namespace extmap {

/// Round-trip decimal formatting (17 significant digits).
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace extmap

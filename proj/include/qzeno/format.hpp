// format.hpp — Locale-independent number formatting for CSV/JSON output

#pragma once

#include <cstdio>
#include <string>

namespace qzeno {

// 17 significant digits: round-trips every double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace qzeno

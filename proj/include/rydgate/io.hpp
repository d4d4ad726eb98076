#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace rydgate {

// 17 significant digits, '.' decimal separator, "nan" for NaN.
inline std::string fmt17(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace rydgate

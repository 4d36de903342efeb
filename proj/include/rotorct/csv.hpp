#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace rotorct {

/// Shortest round-trip decimal for a double; byte-stable for reproducible CSVs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shorter %.15g / %.16g form when it round-trips
    for (int prec = 15; prec <= 16; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

} // namespace rotorct

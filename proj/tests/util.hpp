#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "rotorct/mat2.hpp"

namespace testutil {

inline double unit_double(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_double(rng);
}

inline rotorct::Mat2 random_mat(std::mt19937_64& rng, double scale = 2.0) {
    return {uniform(rng, -scale, scale), uniform(rng, -scale, scale),
            uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

inline rotorct::Vec2 random_vec(std::mt19937_64& rng, double scale = 2.0) {
    return {uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

/// |a - b| measured in units of the larger magnitude's ulp.
inline double ulp_diff(double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    if (m == 0) return 0;
    return std::abs(a - b) / (m * 0x1.0p-52);
}

/// |a - b| in ulps of an explicit scale (for identities with cancellation,
/// the scale is the magnitude of the terms entering each side).
inline double ulp_diff_scaled(double a, double b, double scale) {
    if (scale == 0) return a == b ? 0 : 1e300;
    return std::abs(a - b) / (std::abs(scale) * 0x1.0p-52);
}

} // namespace testutil

#pragma once

#include <cmath>
#include <utility>

namespace rotorct {

/// Gauss 7 / Kronrod 15 panel on [a, b]; returns (integral, error estimate).
template <class Func>
std::pair<double, double> quad_g7k15(const Func& f, double a, double b) {
    // abscissa, Gauss weight (0 on Kronrod-only nodes), Kronrod weight
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529}};

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = nw[0][1] * f0;
    double k15 = nw[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * nw[i][0];
        const double fs = f(mid + dx) + f(mid - dx);
        g7 += nw[i][1] * fs;
        k15 += nw[i][2] * fs;
    }
    g7 *= half;
    k15 *= half;
    const double diff = std::fabs(k15 - g7);
    // standard QUADPACK-style sharpened estimate
    const double err = diff > 0 ? std::pow(200.0 * diff, 1.5) : 0.0;
    return {k15, std::min(diff, err)};
}

/// Adaptive bisection to absolute tolerance; returns (integral, error estimate).
template <class Func>
std::pair<double, double> quad_adaptive(const Func& f, double a, double b, double tol,
                                        int depth = 0) {
    const auto [val, err] = quad_g7k15(f, a, b);
    if (err <= tol || depth >= 48) return {val, err};
    const double mid = 0.5 * (a + b);
    const auto [v1, e1] = quad_adaptive(f, a, mid, tol / 2, depth + 1);
    const auto [v2, e2] = quad_adaptive(f, mid, b, tol / 2, depth + 1);
    return {v1 + v2, e1 + e2};
}

} // namespace rotorct

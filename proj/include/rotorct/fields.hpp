#pragma once

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "rotorct/mat2.hpp"

namespace rotorct {

/// Pointwise summary of a velocity gradient together with the rotation rate k.
/// Sign convention: omega = u_y - v_x (the curl is -omega).
struct GradientState {
    double omega = 0;  // u_y - v_x
    double d = 0;      // divergence, trace
    double gap2 = 0;   // (lambda2-lambda1)^2 = d^2 - 4 det
    double det = 0;
    double phi = 0;    // 4k^2 - 2k*omega
    double r = 0;      // anti-trace v_x + u_y
    double s = 0;      // anti-vorticity u_x - v_y
    double k = 0;
};

GradientState grad_analysis(const Mat2& m, double k);

/// Rectangular sampling domain; unbounded by default.
struct Domain {
    double x0 = -std::numeric_limits<double>::infinity();
    double x1 = std::numeric_limits<double>::infinity();
    double y0 = -std::numeric_limits<double>::infinity();
    double y1 = std::numeric_limits<double>::infinity();
    bool periodic = false;

    bool contains(const Vec2& p) const {
        if (periodic) return true;
        return p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1;
    }
};

struct AffineField {
    Mat2 A;
    Vec2 b{0, 0};
};

/// One separable mode: amp * cos(kx*x + phase_x) * cos(ky*y + phase_y)
/// added to component `target` (0 = u, 1 = v).
struct TrigTerm {
    int target = 0;
    double amp = 0;
    double kx = 0, ky = 0;
    double phase_x = 0, phase_y = 0;
};

struct TrigPolyField {
    std::vector<TrigTerm> terms;
    int cutoff = 0;         // wavenumber cutoff used when generated randomly
    std::uint64_t seed = 0; // generation seed, kept for provenance
};

struct FieldSpec {
    std::variant<AffineField, TrigPolyField> kind;
    Domain domain;
};

/// Deterministic random trigonometric field with integer wavenumbers |k| <= cutoff.
FieldSpec random_trig_field(int cutoff, std::uint64_t seed, double amplitude = 1.0);

struct FieldSample {
    Vec2 U0;
    Mat2 grad;  // exact analytic derivative
};

FieldSample sample_field(const FieldSpec& spec, const Vec2& alpha);

/// Uniform rectangular lattice of sample points.
struct Lattice {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    int nx = 1, ny = 1;

    int size() const { return nx * ny; }
    Vec2 point(int idx) const {
        const int i = idx % nx, j = idx / nx;
        const double fx = nx > 1 ? double(i) / (nx - 1) : 0.5;
        const double fy = ny > 1 ? double(j) / (ny - 1) : 0.5;
        return {x0 + fx * (x1 - x0), y0 + fy * (y1 - y0)};
    }
};

} // namespace rotorct

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rotorct/mat2.hpp"

namespace rotorct {

/// Uniform cell-centered velocity lattice on [c-R, c+R]^2; midpoint weights.
struct VelocityGrid {
    Vec2 center{0, 0};
    double extent = 1;  // R
    int n = 64;         // points per axis

    double h() const { return 2.0 * extent / n; }
    double weight() const { return h() * h(); }
    double coord(int i, int axis) const { return center[axis] - extent + (i + 0.5) * h(); }
    Vec2 point(int i, int j) const { return {coord(i, 0), coord(j, 1)}; }
    int size() const { return n * n; }
    int index(int i, int j) const { return i * n + j; }
};

/// M = rho/(pi T) exp(-|xi - U|^2 / T); integrates to rho over R^2.
double maxwellian(double rho, const Vec2& U, double temperature, const Vec2& xi);

struct MomentSet {
    double rho = 0;
    Vec2 m{0, 0};  // momentum rho U
    double E = 0;  // int |xi|^2/2 f
};

/// Midpoint quadrature of (1, xi, |xi|^2/2) f. Throws TailMassExceeded when the
/// boundary cells carry more than 1e-8 of the total mass.
MomentSet moments(const std::vector<double>& f, const VelocityGrid& grid);

struct ForcingMoments {
    double mass = 0;
    Vec2 momentum{0, 0};
    double energy = 0;
};

/// Moments of the rotational forcing term 2k (J xi) . grad_xi f; the mass and
/// energy components vanish and the momentum component equals -2k rho J U.
/// grad_xi f by fourth-order central differences (f = 0 outside the grid).
ForcingMoments forcing_moments(const std::vector<double>& f, const VelocityGrid& grid, double k);

struct ClosureFluxes {
    Vec2 F_rho{0, 0};   // rho U
    Mat2 F_m;           // rho U (x) U + (rho T/2) I
    Vec2 F_E{0, 0};     // U (rho |U|^2/2 + rho T)
    Mat2 dev_F_m;       // F_m - rho U (x) U, linear in T
    Vec2 dev_F_E{0, 0}; // F_E - U rho |U|^2/2, linear in T
};

ClosureFluxes closure_fluxes(double rho, const Vec2& U, double temperature);

/// Discrete phase-space density on a periodic x-square crossed with a velocity grid.
/// Layout: f[((ix*nx + iy) * n + i) * n + j], x-cell major.
struct KineticGrid {
    int nx = 32;      // x cells per axis, domain [0, L)^2
    double L = 2 * M_PI;
    VelocityGrid vgrid;
    double dt = 0.05;
    double tau_relax = 0.5;
    double temperature = 0.5;
    double k = 1.0;
    std::vector<double> f;

    double hx() const { return L / nx; }
    int cell(int ix, int iy) const { return ix * nx + iy; }
    double* cell_data(int ix, int iy) { return f.data() + std::size_t(cell(ix, iy)) * vgrid.size(); }
    const double* cell_data(int ix, int iy) const {
        return f.data() + std::size_t(cell(ix, iy)) * vgrid.size();
    }
};

/// Individual split substeps (exposed for testing).
void transport_x(KineticGrid& grid, double dt);      // semi-Lagrangian shift, bilinear, periodic
void rotate_xi(KineticGrid& grid, double angle);     // f(x, xi) <- f(x, e^{-angle J} xi)
void relax(KineticGrid& grid, double dt);            // exact relaxation toward the local Maxwellian

/// One Strang-split step: transport(dt/2) rotate(k dt) relax(dt) rotate(k dt) transport(dt/2).
void bgk_step(KineticGrid& grid);

struct BgkConfig {
    int nx = 32;
    double L = 2 * M_PI;
    int nxi = 32;
    double temperature = 0.5;
    double tau = 0.5;
    double k = 1.0;
    Vec2 U0{0.5, 0.0};
    double rho_base = 1.0;
    double rho_pert = 0.3;  // rho(x,y) = base + pert sin(2 pi x/L) sin(2 pi y/L)
    double cfl = 0.9;       // dt = cfl * hx / max|xi|_inf
    double t_end = M_PI;
    double xi_extent = 0;   // 0 = auto: max|U0| + 6 sqrt(T)
};

struct BgkDiagnostics {
    std::vector<double> t, mass, mom_x, mom_y, energy, max_balance_residual;
};

KineticGrid make_grid(const BgkConfig& cfg);

BgkDiagnostics bgk_run(const BgkConfig& cfg, KineticGrid* final_grid = nullptr);

/// Deterministic pairwise reduction.
double pairwise_sum(const double* v, std::size_t n);

/// Moment fields over the x-grid (row-major ix*nx+iy).
struct MomentFields {
    int nx = 0;
    std::vector<double> rho, mx, my, E;
};

MomentFields moment_fields(const KineticGrid& grid);

/// Flat binary snapshot with a JSON header line (shape, dt, k, tau, T, endianness).
void write_snapshot(const KineticGrid& grid, const std::string& path);

} // namespace rotorct

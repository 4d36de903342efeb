#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "rotorct/mat2.hpp"

namespace rotorct {

/// State of the closed gradient system in W = (phi, d, Gamma) coordinates.
struct SpectralState {
    double phi = 0;
    double d = 0;
    double gap2 = 0;
};

inline double omega_of(const SpectralState& s, double k) { return (4.0 * k * k - s.phi) / (2.0 * k); }
inline SpectralState state_from_omega(double omega, double d, double gap2, double k) {
    return {4.0 * k * k - 2.0 * k * omega, d, gap2};
}

/// phi' = -d phi, d' = -(d^2+Gamma)/2 + phi - 4k^2, Gamma' = 2d(phi - 4k^2 - Gamma).
SpectralState rhs_w(const SpectralState& s, double k);

/// Same dynamics in (omega, d, Gamma) coordinates:
/// omega' = 2kd - d omega, d' = -(d^2+Gamma)/2 - 2k omega, Gamma' = 2d(-2k omega - Gamma).
std::array<double, 3> rhs_omega(const std::array<double, 3>& s, double k);

/// Reduced 2-variable system with the first material invariant frozen at C0:
/// phi' = -phi d, d' = -(d^2 + 4k^2 - C0 phi^2)/2.
std::array<double, 2> rhs_reduced(const std::array<double, 2>& s, double C0, double k);

struct SolverConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double dt_init = 1e-3;
    double dt_min = 1e-12;
    double dt_max = std::numeric_limits<double>::infinity();
    double blowup_bound = 1e10;
    long max_steps = 2000000;
};

struct BlowupBracket {
    double t_lo = 0;  // last accepted time
    double t_hi = 0;  // first rejected/overflow time
};

struct Trajectory {
    double k = 0;
    std::vector<double> times;           // strictly increasing accepted times
    std::vector<SpectralState> states;
    std::vector<SpectralState> derivs;   // rhs at each accepted time (dense output)
    double max_C_drift = 0;
    double max_D_drift = 0;
    std::optional<BlowupBracket> blowup;

    /// Cubic Hermite dense evaluation between accepted steps.
    SpectralState at(double t) const;
};

Trajectory integrate(const SpectralState& state0, double k, double t_end, const SolverConfig& cfg = {});

/// Return-map period of (phi, d): first near return to the initial point,
/// refined by local minimization of the squared distance. None for constant
/// trajectories or when no return is found.
std::optional<double> empirical_period(const Trajectory& traj);

/// Closed-form anti-trace/anti-vorticity pair evaluated on a trajectory.
struct RsTrack {
    std::vector<double> t, r, s;
    /// max |(r^2+s^2) - (r0^2+s0^2) exp(-2 int d)| over the samples (quadrature check)
    double max_amplitude_residual = 0;
};

RsTrack antisymmetric_pair(const Trajectory& traj, double r0, double s0, double k);

struct Linearization {
    std::array<std::array<double, 3>, 3> A{};
    std::array<Cplx, 3> eigenvalues{};
};

/// Linearization at a d* = 0 equilibrium (requires Gamma* = 2(phi* - 4k^2)).
Linearization linearize(double phi_star, double gap2_star, double k);

} // namespace rotorct

#include "rotorct/spectral_ode.hpp"

#include <algorithm>
#include <cmath>

#include "rotorct/errors.hpp"

namespace rotorct {

SpectralState rhs_w(const SpectralState& s, double k) {
    const double k2 = 4.0 * k * k;
    return {-s.d * s.phi,
            -(s.d * s.d + s.gap2) / 2.0 + s.phi - k2,
            2.0 * s.d * (s.phi - k2 - s.gap2)};
}

std::array<double, 3> rhs_omega(const std::array<double, 3>& s, double k) {
    const double omega = s[0], d = s[1], gap2 = s[2];
    return {2.0 * k * d - d * omega,
            -(d * d + gap2) / 2.0 - 2.0 * k * omega,
            2.0 * d * (-2.0 * k * omega - gap2)};
}

std::array<double, 2> rhs_reduced(const std::array<double, 2>& s, double C0, double k) {
    const double phi = s[0], d = s[1];
    return {-phi * d, -(d * d + 4.0 * k * k - C0 * phi * phi) / 2.0};
}

namespace {

using Y = std::array<double, 3>;

inline Y to_y(const SpectralState& s) { return {s.phi, s.d, s.gap2}; }
inline SpectralState to_state(const Y& y) { return {y[0], y[1], y[2]}; }

inline Y axpy(const Y& y, double h, const Y& k1, double a1) {
    return {y[0] + h * a1 * k1[0], y[1] + h * a1 * k1[1], y[2] + h * a1 * k1[2]};
}

inline double inf_norm(const Y& y) {
    return std::max({std::fabs(y[0]), std::fabs(y[1]), std::fabs(y[2])});
}

inline bool finite(const Y& y) {
    return std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]);
}

// Dormand-Prince 5(4) tableau.
struct Dp45Result {
    Y y_new;
    Y k_new;  // FSAL derivative at y_new
    double err;
};

Dp45Result dp45_step(const Y& y, const Y& k1, double h, double k, double rel_tol, double abs_tol) {
    auto f = [k](const Y& v) { return to_y(rhs_w(to_state(v), k)); };

    Y y2, y3, y4, y5, y6, y7;
    for (int i = 0; i < 3; ++i) y2[i] = y[i] + h * (1.0 / 5.0) * k1[i];
    const Y k2 = f(y2);
    for (int i = 0; i < 3; ++i) y3[i] = y[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i]);
    const Y k3 = f(y3);
    for (int i = 0; i < 3; ++i)
        y4[i] = y[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i]);
    const Y k4 = f(y4);
    for (int i = 0; i < 3; ++i)
        y5[i] = y[i] + h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2[i] +
                            64448.0 / 6561.0 * k3[i] - 212.0 / 729.0 * k4[i]);
    const Y k5 = f(y5);
    for (int i = 0; i < 3; ++i)
        y6[i] = y[i] + h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2[i] +
                            46732.0 / 5247.0 * k3[i] + 49.0 / 176.0 * k4[i] -
                            5103.0 / 18656.0 * k5[i]);
    const Y k6 = f(y6);
    for (int i = 0; i < 3; ++i)
        y7[i] = y[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] + 125.0 / 192.0 * k4[i] -
                            2187.0 / 6784.0 * k5[i] + 11.0 / 84.0 * k6[i]);
    const Y k7 = f(y7);

    // embedded 4th-order difference
    Y e;
    for (int i = 0; i < 3; ++i)
        e[i] = h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1[i] +
                    (500.0 / 1113.0 - 7571.0 / 16695.0) * k3[i] +
                    (125.0 / 192.0 - 393.0 / 640.0) * k4[i] +
                    (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5[i] +
                    (11.0 / 84.0 - 187.0 / 2100.0) * k6[i] - 1.0 / 40.0 * k7[i]);

    double err = 0;
    for (int i = 0; i < 3; ++i) {
        const double sc = abs_tol + rel_tol * std::max(std::fabs(y[i]), std::fabs(y7[i]));
        err += (e[i] / sc) * (e[i] / sc);
    }
    return {y7, k7, std::sqrt(err / 3.0)};
}

} // namespace

Trajectory integrate(const SpectralState& state0, double k, double t_end, const SolverConfig& cfg) {
    Trajectory traj;
    traj.k = k;

    Y y = to_y(state0);
    Y dy = to_y(rhs_w(state0, k));
    double t = 0;
    double h = std::min(cfg.dt_init, cfg.dt_max);

    const double phi0 = state0.phi;
    double C0 = 0, D0 = 0;
    const bool track = phi0 != 0.0;
    if (track) {
        C0 = (2.0 * phi0 - state0.gap2 - 4.0 * k * k) / (phi0 * phi0);
        D0 = (state0.d * state0.d - state0.gap2) / phi0;
    }

    traj.times.push_back(t);
    traj.states.push_back(state0);
    traj.derivs.push_back(to_state(dy));

    long steps = 0;
    while (t < t_end) {
        if (++steps > cfg.max_steps)
            throw MaxStepsExceeded("spectral ODE integration exceeded max_steps");
        h = std::min({h, cfg.dt_max, t_end - t});

        const Dp45Result st = dp45_step(y, dy, h, k, cfg.rel_tol, cfg.abs_tol);
        const bool overflow = !finite(st.y_new) || inf_norm(st.y_new) > cfg.blowup_bound;

        if (!overflow && st.err <= 1.0) {
            t += h;
            y = st.y_new;
            dy = st.k_new;
            traj.times.push_back(t);
            traj.states.push_back(to_state(y));
            traj.derivs.push_back(to_state(dy));
            if (track && std::fabs(y[0]) > 1e-14 * (1.0 + std::fabs(phi0))) {
                const double C = (2.0 * y[0] - y[2] - 4.0 * k * k) / (y[0] * y[0]);
                const double D = (y[1] * y[1] - y[2]) / y[0];
                traj.max_C_drift = std::max(traj.max_C_drift, std::fabs(C - C0));
                traj.max_D_drift = std::max(traj.max_D_drift, std::fabs(D - D0));
            }
            if (inf_norm(y) > cfg.blowup_bound) {
                traj.blowup = BlowupBracket{traj.times[traj.times.size() - 2], t};
                break;
            }
            h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(st.err, 1e-10), -0.2)));
        } else {
            const double t_fail = t + h;
            h *= overflow ? 0.5 : std::max(0.2, 0.9 * std::pow(st.err, -0.2));
            if (h < cfg.dt_min) {
                // step size underflow: the solution is leaving every bounded set
                traj.blowup = BlowupBracket{t, t_fail};
                break;
            }
        }
    }
    return traj;
}

SpectralState Trajectory::at(double t) const {
    if (times.empty()) return {};
    if (t <= times.front()) return states.front();
    if (t >= times.back()) return states.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = std::size_t(it - times.begin()) - 1;
    const double t0 = times[i], t1 = times[i + 1];
    const double hh = t1 - t0;
    const double u = (t - t0) / hh;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    auto hermite = [&](double p0, double m0, double p1, double m1) {
        return h00 * p0 + h10 * hh * m0 + h01 * p1 + h11 * hh * m1;
    };
    const SpectralState &s0 = states[i], &s1 = states[i + 1];
    const SpectralState &d0 = derivs[i], &d1 = derivs[i + 1];
    return {hermite(s0.phi, d0.phi, s1.phi, d1.phi),
            hermite(s0.d, d0.d, s1.d, d1.d),
            hermite(s0.gap2, d0.gap2, s1.gap2, d1.gap2)};
}

std::optional<double> empirical_period(const Trajectory& traj) {
    if (traj.blowup || traj.times.size() < 3) return std::nullopt;
    const double t_end = traj.times.back();
    const SpectralState s0 = traj.states.front();

    const int n = 8192;
    std::vector<double> dist2(n + 1);
    double max_d2 = 0;
    for (int i = 0; i <= n; ++i) {
        const SpectralState s = traj.at(t_end * i / n);
        const double dphi = s.phi - s0.phi, dd = s.d - s0.d;
        dist2[i] = dphi * dphi + dd * dd;
        max_d2 = std::max(max_d2, dist2[i]);
    }
    const double scale2 = s0.phi * s0.phi + s0.d * s0.d + 1.0;
    if (max_d2 < 1e-20 * scale2) return std::nullopt;  // constant trajectory

    bool armed = false;
    for (int i = 1; i < n; ++i) {
        if (dist2[i] > 0.25 * max_d2) armed = true;
        if (!armed) continue;
        if (dist2[i] <= dist2[i - 1] && dist2[i] <= dist2[i + 1] && dist2[i] < 0.01 * max_d2) {
            // golden-section refinement of the nearest approach
            double a = t_end * (i - 1) / n, b = t_end * (i + 1) / n;
            auto d2 = [&](double t) {
                const SpectralState s = traj.at(t);
                const double dphi = s.phi - s0.phi, dd = s.d - s0.d;
                return dphi * dphi + dd * dd;
            };
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = d2(x1), f2 = d2(x2);
            for (int it = 0; it < 120 && (b - a) > 1e-14 * t_end; ++it) {
                if (f1 < f2) {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - gr * (b - a); f1 = d2(x1);
                } else {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + gr * (b - a); f2 = d2(x2);
                }
            }
            return 0.5 * (a + b);
        }
    }
    return std::nullopt;
}

RsTrack antisymmetric_pair(const Trajectory& traj, double r0, double s0, double k) {
    if (traj.states.empty()) return {};
    const SpectralState& init = traj.states.front();
    const double omega0 = omega_of(init, k);
    const double lhs = r0 * r0 + s0 * s0;
    const double rhs = init.gap2 + omega0 * omega0;
    if (std::fabs(lhs - rhs) > 1e-8 * (1.0 + std::fabs(lhs) + std::fabs(rhs)))
        throw InconsistentInitialPair("r0^2 + s0^2 must equal Gamma(0) + omega(0)^2");

    RsTrack track;
    const double phase0 = std::atan2(r0, s0);
    double int_d = 0;  // trapezoid with midpoint Richardson refinement per interval
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (i > 0) {
            const double ta = traj.times[i - 1], tb = traj.times[i];
            const double h = tb - ta;
            const double da = traj.states[i - 1].d, db = traj.states[i].d;
            const double dm = traj.at(0.5 * (ta + tb)).d;
            const double coarse = 0.5 * h * (da + db);
            const double fine = 0.25 * h * (da + 2.0 * dm + db);
            int_d += (4.0 * fine - coarse) / 3.0;
        }
        const SpectralState& s = traj.states[i];
        const double omega = omega_of(s, k);
        const double amp2 = std::max(s.gap2 + omega * omega, 0.0);
        const double amp = std::sqrt(amp2);
        const double phase = phase0 - 2.0 * k * traj.times[i];
        track.t.push_back(traj.times[i]);
        track.r.push_back(std::sin(phase) * amp);
        track.s.push_back(std::cos(phase) * amp);
        const double law = lhs * std::exp(-2.0 * int_d);
        track.max_amplitude_residual =
            std::max(track.max_amplitude_residual, std::fabs(amp2 - law));
    }
    return track;
}

Linearization linearize(double phi_star, double gap2_star, double k) {
    const double target = 2.0 * (phi_star - 4.0 * k * k);
    if (std::fabs(gap2_star - target) > 1e-8 * (1.0 + std::fabs(phi_star) + 4.0 * k * k))
        throw NotEquilibrium("Gamma* must equal 2(phi* - 4k^2) at a d* = 0 equilibrium");
    Linearization lin;
    lin.A = {{{0.0, -phi_star, 0.0}, {1.0, 0.0, -0.5}, {0.0, 2.0 * phi_star, 0.0}}};
    const Cplx mu = std::sqrt(Cplx(-2.0 * phi_star));
    lin.eigenvalues = {Cplx(0.0), mu, -mu};
    return lin;
}

} // namespace rotorct

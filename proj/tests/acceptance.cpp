// Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rotorct/errors.hpp"
#include "rotorct/fields.hpp"
#include "rotorct/flowmap.hpp"
#include "rotorct/kinetic.hpp"
#include "rotorct/parallel.hpp"
#include "rotorct/period.hpp"
#include "rotorct/scenario.hpp"
#include "rotorct/spectral_ode.hpp"
#include "rotorct/threshold.hpp"

using namespace rotorct;

namespace {

double unit_double(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_double(rng);
}

struct Case {
    Mat2 grad;
    double k = 0;
};

// random gradient/k pairs with |i0| > margin * (1 + 4k^2)
std::vector<Case> sample_cases(std::mt19937_64& rng, int n, double margin,
                               bool subcritical_only, bool positive_phi) {
    std::vector<Case> out;
    while (int(out.size()) < n) {
        Case c{{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2),
                uniform(rng, -2, 2)},
               uniform(rng, 0.2, 2.0)};
        const GradientState g = grad_analysis(c.grad, c.k);
        const double i0 = threshold_indicator(g);
        if (std::abs(i0) <= margin * (1 + 4 * c.k * c.k)) continue;
        if (subcritical_only && i0 < 0) continue;
        if (positive_phi && g.phi <= 0.1) continue;
        out.push_back(c);
    }
    return out;
}

int g_failures = 0;

void report(int idx, bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("criterion %d: %s - %s%s%s\n", idx, ok ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : " | ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void criterion1() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    const auto cases = sample_cases(rng, 1000, 0.01, false, false);
    std::atomic<int> mismatches{0};
    parallel_for(int(cases.size()), [&](int i) {
        const GradientState g = grad_analysis(cases[i].grad, cases[i].k);
        const double i0 = threshold_indicator(g);
        SolverConfig sc;
        sc.rel_tol = 1e-8;
        sc.abs_tol = 1e-10;
        Trajectory traj;
        bool ode_blows = false;
        try {
            traj = integrate({g.phi, g.d, g.gap2}, g.k, 10 * M_PI / g.k, sc);
            ode_blows = traj.blowup.has_value();
        } catch (const MaxStepsExceeded&) {
            ode_blows = true;
        }
        const bool map_singular =
            first_singularity(g.omega, g.d, g.det, g.k).has_value();
        if (ode_blows != (i0 < 0) || map_singular != (i0 < 0)) ++mismatches;
    });
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char detail[128];
    std::snprintf(detail, sizeof detail, "1000 cases, %d mismatches, %.1f s",
                  mismatches.load(), secs);
    report(1, mismatches == 0 && secs <= 60.0,
           "threshold dichotomy: ODE blowup and map singularity iff i0 < 0", detail);
}

void criterion2() {
    std::mt19937_64 rng(1002);
    const auto cases = sample_cases(rng, 100, 0.01, true, true);
    double worst = 0;
    for (const Case& c : cases) {
        const GradientState g = grad_analysis(c.grad, c.k);
        SolverConfig sc;
        sc.rel_tol = 1e-10;
        const Trajectory traj = integrate({g.phi, g.d, g.gap2}, c.k, M_PI / c.k, sc);
        worst = std::max(worst, std::max(traj.max_C_drift, traj.max_D_drift));
    }
    char detail[96];
    std::snprintf(detail, sizeof detail, "max invariant drift %.2e", worst);
    report(2, worst <= 1e-8,
           "material invariants constant along 100 subcritical trajectories", detail);
}

void criterion3() {
    std::vector<double> thetas{0.01};
    for (double t = 0.05; t < 1.0 + 1e-9; t += 0.05) thetas.push_back(t);
    const double k = 0.5, tol = 1e-12;
    bool ok = true;
    std::string why;
    for (double th : thetas) {
        const PeriodResult quad = period_quadrature(th, k, tol);
        if (std::abs(quad.T_bar * k / M_PI - 1.0) > 1e-8) {
            ok = false;
            why = "quadrature ratio off at theta0 = " + std::to_string(th);
            break;
        }
        // same orbit through the phi-integral: C0 = 1, D0 = (1 + (2k th)^2)/(2k th)
        const double phi0 = 2 * k * th;
        if (th < 1.0) {
            const double D0 = (1 + phi0 * phi0) / phi0;
            const PeriodResult alt = period_from_phi_integral(1.0, D0, k, tol);
            if (std::abs(alt.T_bar - quad.T_bar) > 2 * tol + 1e-10 * quad.T_bar) {
                ok = false;
                why = "phi-integral route disagrees at theta0 = " + std::to_string(th);
                break;
            }
            // empirical ODE period from the turning point of the same orbit
            const double gap20 = 2 * phi0 - 4 * k * k - phi0 * phi0;
            const Trajectory traj = integrate({phi0, 0, gap20}, k, 3 * M_PI / k);
            const auto emp = empirical_period(traj);
            if (!emp || std::abs(*emp - quad.T_bar) / quad.T_bar > 1e-5) {
                ok = false;
                why = "empirical period off at theta0 = " + std::to_string(th);
                break;
            }
        } else {
            // theta0 = 1 is the point orbit: the trajectory is constant and the
            // return-map period is undefined; assert the degeneracy instead
            const double gap20 = 2 * phi0 - 4 * k * k - phi0 * phi0;
            const Trajectory traj = integrate({phi0, 0, gap20}, k, 3 * M_PI / k);
            for (const SpectralState& s : traj.states)
                if (std::abs(s.phi - phi0) > 1e-9 || std::abs(s.d) > 1e-9) {
                    ok = false;
                    why = "theta0 = 1 orbit is not the fixed point";
                }
            if (empirical_period(traj).has_value()) {
                ok = false;
                why = "constant trajectory reported a period";
            }
        }
    }
    report(3, ok, "T_bar k/pi = 1 across the theta0 grid; ODE and phi-integral agree",
           why);
}

void criterion4() {
    std::mt19937_64 rng(1004);
    bool ok = true;
    std::string why;
    double worst_ulp = 0;
    for (int it = 0; it < 100; ++it) {
        const Vec2 a{uniform(rng, -3, 3), uniform(rng, -3, 3)};
        const Vec2 u0{uniform(rng, -3, 3), uniform(rng, -3, 3)};
        const double k = uniform(rng, 0.2, 2.0);
        const double t = uniform(rng, 0, 8.0);
        const FlowMapState s = flow_map(a, u0, k, t);
        const OrbitDescriptor orb = orbit_descriptor(a, u0, k);
        const double scale = 1 + norm(a) + norm(u0) + orb.radius;
        const double e1 = std::abs(norm(s.Xdot) - norm(u0)) / (norm(u0) * 0x1.0p-52);
        const double e2 =
            std::abs(norm(s.X - orb.center) - orb.radius) / (scale * 0x1.0p-52);
        const FlowMapState sp = flow_map(a, u0, k, t + M_PI / k);
        const double e3 = std::hypot(s.X[0] - sp.X[0], s.X[1] - sp.X[1]) /
                          ((scale + norm(u0) / k) * 0x1.0p-52);
        worst_ulp = std::max({worst_ulp, e1, e2, e3});
    }
    if (worst_ulp > 8) {
        ok = false;
        why = "flow-map identity exceeded 8 ulps";
    }

    const auto tstar = first_singularity(0, 0, -4, 1.0);
    if (!tstar || std::abs(*tstar - M_PI / 6) > 1e-12) {
        ok = false;
        why = "pure-strain singularity time off";
    }

    double worst_grad = 0;
    const auto sub = sample_cases(rng, 20, 0.01, true, true);
    for (const Case& c : sub) {
        const GradientState g = grad_analysis(c.grad, c.k);
        SolverConfig sc;
        sc.rel_tol = 1e-11;
        sc.abs_tol = 1e-13;
        const Trajectory traj = integrate({g.phi, g.d, g.gap2}, c.k, M_PI / c.k, sc);
        for (int j = 1; j <= 16; ++j) {
            const double t = j * (M_PI / c.k) / 16.0;
            const Mat2 e = eulerian_gradient(c.grad, c.k, t);
            const SpectralState s = traj.at(t);
            worst_grad = std::max(worst_grad, std::abs((e.a12 - e.a21) - omega_of(s, c.k)));
            worst_grad = std::max(worst_grad, std::abs(e.trace() - s.d));
            const double gap2 = e.trace() * e.trace() - 4 * e.det();
            worst_grad = std::max(worst_grad, std::abs(gap2 - s.gap2));
        }
    }
    if (worst_grad > 1e-6) {
        ok = false;
        why = "eulerian gradient vs ODE disagreement";
    }
    char detail[128];
    std::snprintf(detail, sizeof detail, "worst identity %.2f ulp, worst gradient gap %.2e",
                  worst_ulp, worst_grad);
    report(4, ok, "exact flow map: identities, pi/6 strain singularity, gradient law",
           why.empty() ? detail : why);
}

void criterion5() {
    std::mt19937_64 rng(1005);
    int tested = 0;
    double worst = 0;
    while (tested < 10000) {
        const Mat2 m{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2),
                     uniform(rng, -2, 2)};
        const double gap2 = m.trace() * m.trace() - 4 * m.det();
        const Cplx eta = std::sqrt(Cplx(gap2));
        if (std::abs(eta) <= 1e-6) continue;
        ++tested;
        const Cplx want = Cplx(m.a12 - m.a21) / eta;
        const Cplx got = spectral_pairing_ratio(m);
        worst = std::max(worst, std::abs(got - want) / (1 + std::abs(want)));
    }
    char detail[64];
    std::snprintf(detail, sizeof detail, "worst relative error %.2e", worst);
    report(5, worst <= 1e-10, "eigen-pairing identity on 10^4 random matrices", detail);
}

void criterion6() {
    bool ok = true;
    std::string why;
    const FreeTransportResult r1 = free_transport_breakdown(Cplx(-1, 0));
    if (!(r1.eigenvalue_real && r1.forward_breakdown == 1.0)) {
        ok = false;
        why = "lambda0 = -1 must break at t = 1 exactly";
    }
    const FreeTransportResult r2 = free_transport_breakdown(Cplx(0, 1));
    if (r2.eigenvalue_real || std::isfinite(r2.forward_breakdown) ||
        std::isfinite(r2.backward_breakdown)) {
        ok = false;
        why = "lambda0 = i must never break";
    }

    // k = 0 trajectories against lambda(t) = lambda0/(t lambda0 + 1)
    SolverConfig sc;
    sc.rel_tol = 1e-12;
    sc.abs_tol = 1e-14;
    double worst = 0;
    {
        // lambda0 = -1: d0 = -2, Gamma0 = 0, d(t) = -2/(1 - t)
        const Trajectory traj = integrate({0, -2, 0}, 0.0, 0.9, sc);
        for (double t : {0.1, 0.3, 0.5, 0.7, 0.85})
            worst = std::max(worst, std::abs(traj.at(t).d - (-2.0 / (1.0 - t))));
    }
    {
        // lambda0 = i: d0 = 0, Gamma0 = -4; d(t) = 2t/(1+t^2), Gamma = -4/(1+t^2)^2
        const Trajectory traj = integrate({0, 0, -4}, 0.0, 3.0, sc);
        for (double t : {0.5, 1.0, 2.0, 3.0}) {
            const SpectralState s = traj.at(t);
            const double den = 1 + t * t;
            worst = std::max(worst, std::abs(s.d - 2 * t / den));
            worst = std::max(worst, std::abs(s.gap2 + 4 / (den * den)));
        }
    }
    if (worst > 1e-8) {
        ok = false;
        why = "k = 0 trajectory deviates from the Riccati solution";
    }
    char detail[64];
    std::snprintf(detail, sizeof detail, "worst Riccati error %.2e", worst);
    report(6, ok, "free transport breakdown times and k = 0 closed form",
           why.empty() ? detail : why);
}

void criterion7() {
    bool ok = true;
    std::string why;
    const double T = 0.5;
    const Vec2 U{1, -1};
    VelocityGrid grid;
    grid.center = U;
    grid.extent = 6 * std::sqrt(T);
    grid.n = 128;
    std::vector<double> f(grid.size());
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            f[grid.index(i, j)] = maxwellian(2.0, U, T, grid.point(i, j));

    const MomentSet m = moments(f, grid);
    const double centered2 = 2 * m.E - (m.m[0] * m.m[0] + m.m[1] * m.m[1]) / m.rho;
    if (std::abs(m.rho - 2) > 1e-5 || std::abs(m.m[0] - 2) > 1e-5 ||
        std::abs(m.m[1] + 2) > 1e-5 || std::abs(centered2 - 1.0) > 1e-5) {
        ok = false;
        why = "Maxwellian moment set off";
    }

    const ForcingMoments fm = forcing_moments(f, grid, 1.0);
    if (std::abs(fm.mass) > 1e-5 || std::abs(fm.momentum[0] - 4) > 1e-5 ||
        std::abs(fm.momentum[1] - 4) > 1e-5 || std::abs(fm.energy) > 1e-5) {
        ok = false;
        why = "forcing-moment identity off";
    }

    const ClosureFluxes c1 = closure_fluxes(1.3, {0.4, 0.7}, 0.8);
    const ClosureFluxes c2 = closure_fluxes(1.3, {0.4, 0.7}, 0.4);
    const double ratio = c2.dev_F_m.frob_norm() / c1.dev_F_m.frob_norm();
    if (std::abs(ratio - 0.5) > 0.05 * 0.5) {
        ok = false;
        why = "closure deviation does not halve with T";
    }
    char detail[96];
    std::snprintf(detail, sizeof detail,
                  "rho err %.1e, forcing err %.1e, deviation ratio %.6f",
                  std::abs(m.rho - 2), std::abs(fm.momentum[0] - 4), ratio);
    report(7, ok, "kinetic moment, forcing and closure identities at N = 128",
           why.empty() ? detail : why);
}

void criterion8() {
    const auto start = std::chrono::steady_clock::now();
    BgkConfig cfg;
    cfg.nx = 32;
    cfg.nxi = 32;
    cfg.k = 1.0;
    cfg.t_end = M_PI / cfg.k;
    const BgkDiagnostics diag = bgk_run(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool ok = true;
    std::string why;
    double mass_drift = 0;
    for (double m : diag.mass)
        mass_drift = std::max(mass_drift, std::abs(m - diag.mass.front()) / diag.mass.front());
    if (mass_drift > 1e-10) {
        ok = false;
        why = "mass drift above 1e-10";
    }
    const double angle0 = std::atan2(diag.mom_y.front(), diag.mom_x.front());
    double worst_angle = 0;
    for (std::size_t i = 0; i < diag.t.size(); ++i) {
        const double want = angle0 - 2 * cfg.k * diag.t[i];
        double delta = std::atan2(diag.mom_y[i], diag.mom_x[i]) - want;
        while (delta > M_PI) delta -= 2 * M_PI;
        while (delta < -M_PI) delta += 2 * M_PI;
        worst_angle = std::max(worst_angle, std::abs(delta));
    }
    if (worst_angle > 2 * M_PI / 180) {
        ok = false;
        why = "momentum angle off by more than 2 degrees";
    }
    double energy_drift = 0;
    for (double e : diag.energy)
        energy_drift =
            std::max(energy_drift, std::abs(e - diag.energy.front()) / diag.energy.front());
    if (energy_drift > 0.01) {
        ok = false;
        why = "energy drift above 1%";
    }
    if (secs > 300) {
        ok = false;
        why = "runtime above 5 minutes";
    }
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "mass drift %.1e, angle err %.2f deg, energy drift %.2f%%, %.0f s",
                  mass_drift, worst_angle * 180 / M_PI, 100 * energy_drift, secs);
    report(8, ok, "BGK 32^2 x 32^2 over one inertial period", why.empty() ? detail : why);
}

void criterion9() {
    bool ok = true;
    std::string why;
    const UnitsReport gulf = units_convert(0.07, 1e5, 1.0);
    const UnitsReport weather = units_convert(0.14, 1e6, 20.0);
    const double gulf_hr = gulf.inertial_period_physical_s / 3600;
    const double weather_hr = weather.inertial_period_physical_s / 3600;
    if (std::abs(gulf_hr - 12.2) > 0.1 || std::abs(weather_hr - 12.2) > 0.1) {
        ok = false;
        why = "reference periods outside 12.2 +- 0.1 hr";
    }

    // report must carry the annotations
    const auto dir = std::filesystem::temp_directory_path() / "rotorct_acceptance_units";
    std::filesystem::create_directories(dir);
    ScenarioConfig cfg = parse_config(
        R"({"mode": "units", "epsilon": 0.07, "L_bar_m": 1e5, "U_bar_mps": 1.0})");
    cfg.out_dir = dir.string();
    run_scenario(cfg);
    std::ifstream in(dir / "report.json", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string rep = ss.str();
    if (rep.find("recorded discrepancy") == std::string::npos ||
        rep.find("11.7") == std::string::npos) {
        ok = false;
        why = "missing 11.7 hr discrepancy annotation";
    }
    if (rep.find("earth_core") == std::string::npos ||
        rep.find("jupiter_red_spot") == std::string::npos ||
        rep.find("\"excluded\": true") == std::string::npos) {
        ok = false;
        why = "missing excluded reference-configuration records";
    }
    std::filesystem::remove_all(dir);
    char detail[96];
    std::snprintf(detail, sizeof detail, "gulf %.3f hr, weather %.3f hr, annotations present",
                  gulf_hr, weather_hr);
    report(9, ok, "physical unit conversions and recorded discrepancies",
           why.empty() ? detail : why);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0) {
        std::printf("all 9 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", g_failures);
    return 1;
}

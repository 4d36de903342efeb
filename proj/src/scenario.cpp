#include "rotorct/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rotorct/csv.hpp"
#include "rotorct/errors.hpp"
#include "rotorct/flowmap.hpp"
#include "rotorct/period.hpp"
#include "rotorct/threshold.hpp"

namespace rotorct {

using nlohmann::json;

UnitsReport units_convert(double epsilon, double L_bar_m, double U_bar_mps) {
    UnitsReport r;
    r.k = 1.0 / (2.0 * epsilon);
    r.Omega = U_bar_mps / (2.0 * epsilon * L_bar_m);
    r.time_scale_s = L_bar_m / U_bar_mps;
    r.inertial_period_scaled = M_PI / r.k;
    r.inertial_period_physical_s = M_PI / r.Omega;
    return r;
}

namespace {

json mat_to_json(const Mat2& m) {
    return json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})});
}

Mat2 mat_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
        throw ConfigInvalid("field.A must be a 2x2 array");
    return {j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(),
            j[1][1].get<double>()};
}

Vec2 vec_from_json(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigInvalid(std::string(name) + " must be a 2-vector");
    return {j[0].get<double>(), j[1].get<double>()};
}

json field_to_json(const FieldSpec& spec) {
    json j;
    if (const auto* aff = std::get_if<AffineField>(&spec.kind)) {
        j["kind"] = "affine";
        j["A"] = mat_to_json(aff->A);
        j["b"] = json::array({aff->b[0], aff->b[1]});
    } else {
        const auto& tp = std::get<TrigPolyField>(spec.kind);
        j["kind"] = "trig_poly";
        j["cutoff"] = tp.cutoff;
        j["seed"] = tp.seed;
        json terms = json::array();
        for (const TrigTerm& t : tp.terms)
            terms.push_back({{"target", t.target == 0 ? "u" : "v"},
                             {"amp", t.amp},
                             {"kx", t.kx},
                             {"ky", t.ky},
                             {"phase_x", t.phase_x},
                             {"phase_y", t.phase_y}});
        j["terms"] = terms;
    }
    if (std::isfinite(spec.domain.x0)) {
        j["domain"] = {{"x0", spec.domain.x0}, {"x1", spec.domain.x1},
                       {"y0", spec.domain.y0}, {"y1", spec.domain.y1},
                       {"periodic", spec.domain.periodic}};
    } else if (spec.domain.periodic) {
        j["domain"] = {{"periodic", true}};
    }
    return j;
}

FieldSpec field_from_json(const json& j) {
    FieldSpec spec;
    const std::string kind = j.value("kind", "");
    if (kind == "affine") {
        AffineField aff;
        if (!j.contains("A")) throw ConfigInvalid("field: affine requires A");
        aff.A = mat_from_json(j.at("A"));
        if (j.contains("b")) aff.b = vec_from_json(j.at("b"), "field.b");
        spec.kind = aff;
    } else if (kind == "trig_poly") {
        TrigPolyField tp;
        tp.cutoff = j.value("cutoff", 0);
        tp.seed = j.value("seed", std::uint64_t(0));
        if (j.contains("terms")) {
            for (const json& tj : j.at("terms")) {
                TrigTerm t;
                const std::string target = tj.value("target", "u");
                t.target = target == "v" ? 1 : 0;
                t.amp = tj.value("amp", 0.0);
                t.kx = tj.value("kx", 0.0);
                t.ky = tj.value("ky", 0.0);
                t.phase_x = tj.value("phase_x", 0.0);
                t.phase_y = tj.value("phase_y", 0.0);
                tp.terms.push_back(t);
            }
        }
        spec.kind = tp;
    } else {
        throw ConfigInvalid("field.kind must be 'affine' or 'trig_poly'");
    }
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        spec.domain.x0 = d.value("x0", spec.domain.x0);
        spec.domain.x1 = d.value("x1", spec.domain.x1);
        spec.domain.y0 = d.value("y0", spec.domain.y0);
        spec.domain.y1 = d.value("y1", spec.domain.y1);
        spec.domain.periodic = d.value("periodic", false);
    }
    return spec;
}

Mode mode_from_string(const std::string& s) {
    if (s == "classify") return Mode::Classify;
    if (s == "integrate") return Mode::Integrate;
    if (s == "period") return Mode::Period;
    if (s == "flowmap") return Mode::Flowmap;
    if (s == "kinetic-check") return Mode::KineticCheck;
    if (s == "kinetic-run") return Mode::KineticRun;
    if (s == "units") return Mode::Units;
    throw ConfigInvalid("unknown mode '" + s + "'");
}

const char* mode_to_string(Mode m) {
    switch (m) {
        case Mode::Classify: return "classify";
        case Mode::Integrate: return "integrate";
        case Mode::Period: return "period";
        case Mode::Flowmap: return "flowmap";
        case Mode::KineticCheck: return "kinetic-check";
        case Mode::KineticRun: return "kinetic-run";
        default: return "units";
    }
}

} // namespace

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigInvalid(std::string("JSON parse error: ") + e.what());
    }
    ScenarioConfig cfg;
    if (!j.contains("mode")) throw ConfigInvalid("missing required field 'mode'");
    cfg.mode = mode_from_string(j.at("mode").get<std::string>());

    const bool has_k = j.contains("k");
    const bool has_units =
        j.contains("epsilon") || j.contains("L_bar_m") || j.contains("U_bar_mps");
    if (has_k == has_units)
        throw ConfigInvalid("exactly one of 'k' or the (epsilon, L_bar_m, U_bar_mps) triple "
                            "must be present");
    if (has_k) {
        cfg.k = j.at("k").get<double>();
    } else {
        if (!(j.contains("epsilon") && j.contains("L_bar_m") && j.contains("U_bar_mps")))
            throw ConfigInvalid("the units triple requires epsilon, L_bar_m and U_bar_mps");
        UnitsInput u;
        u.epsilon = j.at("epsilon").get<double>();
        u.L_bar_m = j.at("L_bar_m").get<double>();
        u.U_bar_mps = j.at("U_bar_mps").get<double>();
        if (u.epsilon <= 0 || u.L_bar_m <= 0 || u.U_bar_mps <= 0)
            throw ConfigInvalid("epsilon, L_bar_m and U_bar_mps must be positive");
        cfg.units = u;
        cfg.k = 1.0 / (2.0 * u.epsilon);
    }

    if (j.contains("field")) cfg.field = field_from_json(j.at("field"));
    else if (cfg.mode == Mode::Classify || cfg.mode == Mode::Integrate ||
             cfg.mode == Mode::Flowmap)
        throw ConfigInvalid(std::string("mode '") + mode_to_string(cfg.mode) +
                            "' requires a 'field'");

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        cfg.grid.x0 = g.value("x0", cfg.grid.x0);
        cfg.grid.x1 = g.value("x1", cfg.grid.x1);
        cfg.grid.y0 = g.value("y0", cfg.grid.y0);
        cfg.grid.y1 = g.value("y1", cfg.grid.y1);
        cfg.grid.nx = g.value("nx", cfg.grid.nx);
        cfg.grid.ny = g.value("ny", cfg.grid.ny);
        if (cfg.grid.nx < 1 || cfg.grid.ny < 1) throw ConfigInvalid("grid.nx/ny must be >= 1");
    }
    if (j.contains("alpha0")) cfg.alpha0 = vec_from_json(j.at("alpha0"), "alpha0");
    cfg.t_end = j.value("t_end", cfg.t_end);
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        cfg.solver.rel_tol = s.value("rel_tol", cfg.solver.rel_tol);
        cfg.solver.abs_tol = s.value("abs_tol", cfg.solver.abs_tol);
        cfg.solver.dt_init = s.value("dt_init", cfg.solver.dt_init);
        cfg.solver.dt_min = s.value("dt_min", cfg.solver.dt_min);
        cfg.solver.blowup_bound = s.value("blowup_bound", cfg.solver.blowup_bound);
        cfg.solver.max_steps = s.value("max_steps", cfg.solver.max_steps);
        if (cfg.solver.rel_tol <= 0 || cfg.solver.abs_tol <= 0)
            throw ConfigInvalid("solver tolerances must be positive");
        if (cfg.solver.dt_min >= cfg.solver.dt_init)
            throw ConfigInvalid("solver.dt_min must be below solver.dt_init");
    }
    if (j.contains("theta0_values"))
        cfg.theta0_values = j.at("theta0_values").get<std::vector<double>>();
    cfg.quad_tol = j.value("quad_tol", cfg.quad_tol);
    if (j.contains("kinetic")) {
        const json& kj = j.at("kinetic");
        cfg.kinetic.nx = kj.value("nx", cfg.kinetic.nx);
        cfg.kinetic.nxi = kj.value("nxi", cfg.kinetic.nxi);
        if (cfg.kinetic.nx > 64 || cfg.kinetic.nxi > 64)
            throw ConfigInvalid("kinetic resolution budget is 64^2 x 64^2");
        cfg.kinetic.L = kj.value("L", cfg.kinetic.L);
        cfg.kinetic.temperature = kj.value("temperature", cfg.kinetic.temperature);
        cfg.kinetic.tau = kj.value("tau", cfg.kinetic.tau);
        if (kj.contains("U0")) cfg.kinetic.U0 = vec_from_json(kj.at("U0"), "kinetic.U0");
        cfg.kinetic.rho_base = kj.value("rho_base", cfg.kinetic.rho_base);
        cfg.kinetic.rho_pert = kj.value("rho_pert", cfg.kinetic.rho_pert);
        cfg.kinetic.cfl = kj.value("cfl", cfg.kinetic.cfl);
        cfg.kinetic.t_end = kj.value("t_end", cfg.kinetic.t_end);
        cfg.kinetic.xi_extent = kj.value("xi_extent", cfg.kinetic.xi_extent);
    }
    cfg.kinetic.k = cfg.k;
    cfg.seed = j.value("seed", std::uint64_t(0));
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.fail_on_supercritical = j.value("fail_on_supercritical", false);
    return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json j;
    j["mode"] = mode_to_string(cfg.mode);
    if (cfg.units) {
        j["epsilon"] = cfg.units->epsilon;
        j["L_bar_m"] = cfg.units->L_bar_m;
        j["U_bar_mps"] = cfg.units->U_bar_mps;
    } else {
        j["k"] = cfg.k;
    }
    j["field"] = field_to_json(cfg.field);
    j["grid"] = {{"x0", cfg.grid.x0}, {"x1", cfg.grid.x1}, {"y0", cfg.grid.y0},
                 {"y1", cfg.grid.y1}, {"nx", cfg.grid.nx}, {"ny", cfg.grid.ny}};
    j["alpha0"] = json::array({cfg.alpha0[0], cfg.alpha0[1]});
    j["t_end"] = cfg.t_end;
    j["solver"] = {{"rel_tol", cfg.solver.rel_tol},       {"abs_tol", cfg.solver.abs_tol},
                   {"dt_init", cfg.solver.dt_init},       {"dt_min", cfg.solver.dt_min},
                   {"blowup_bound", cfg.solver.blowup_bound}, {"max_steps", cfg.solver.max_steps}};
    if (!cfg.theta0_values.empty()) j["theta0_values"] = cfg.theta0_values;
    j["quad_tol"] = cfg.quad_tol;
    j["kinetic"] = {{"nx", cfg.kinetic.nx},
                    {"nxi", cfg.kinetic.nxi},
                    {"L", cfg.kinetic.L},
                    {"temperature", cfg.kinetic.temperature},
                    {"tau", cfg.kinetic.tau},
                    {"U0", json::array({cfg.kinetic.U0[0], cfg.kinetic.U0[1]})},
                    {"rho_base", cfg.kinetic.rho_base},
                    {"rho_pert", cfg.kinetic.rho_pert},
                    {"cfl", cfg.kinetic.cfl},
                    {"t_end", cfg.kinetic.t_end},
                    {"xi_extent", cfg.kinetic.xi_extent}};
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["fail_on_supercritical"] = cfg.fail_on_supercritical;
    return j.dump(2);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string out_path(const ScenarioConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_report(const ScenarioConfig& cfg, json body) {
    body["mode"] = mode_to_string(cfg.mode);
    body["k"] = cfg.k;
    write_file_atomic(out_path(cfg, "report.json"), body.dump(2) + "\n");
}

int run_classify(const ScenarioConfig& cfg) {
    const FieldClassification fc = classify_field(cfg.field, cfg.k, cfg.grid);
    std::string csv = threshold_csv_header() + "\n";
    for (const PointReport& p : fc.points) csv += threshold_csv_row(p) + "\n";
    write_file_atomic(out_path(cfg, "classification.csv"), csv);
    write_report(cfg, {{"global_verdict", to_string(fc.global)},
                       {"min_i0", fc.min_i0},
                       {"points", fc.points.size()}});
    if (cfg.fail_on_supercritical && fc.global != Verdict::Subcritical) return 2;
    return 0;
}

int run_integrate(const ScenarioConfig& cfg) {
    const FieldSample fs = sample_field(cfg.field, cfg.alpha0);
    const GradientState g = grad_analysis(fs.grad, cfg.k);
    const SpectralState s0{g.phi, g.d, g.gap2};
    const Trajectory traj = integrate(s0, cfg.k, cfg.t_end, cfg.solver);

    double C0 = 0, D0 = 0;
    const bool have_inv = g.phi != 0.0;
    if (have_inv) {
        const MaterialConstants mc = material_constants(g);
        C0 = mc.C0;
        D0 = (g.d * g.d - g.gap2) / g.phi;
    }
    std::string csv = "t,phi,d,gap2,omega,C_drift,D_drift\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const SpectralState& s = traj.states[i];
        double cd = 0, dd = 0;
        if (have_inv && std::fabs(s.phi) > 1e-14) {
            cd = (2 * s.phi - s.gap2 - 4 * cfg.k * cfg.k) / (s.phi * s.phi) - C0;
            dd = (s.d * s.d - s.gap2) / s.phi - D0;
        }
        csv += fmt_double(traj.times[i]) + ',' + fmt_double(s.phi) + ',' + fmt_double(s.d) + ',' +
               fmt_double(s.gap2) + ',' + fmt_double(omega_of(s, cfg.k)) + ',' + fmt_double(cd) +
               ',' + fmt_double(dd) + "\n";
    }
    write_file_atomic(out_path(cfg, "trajectory.csv"), csv);

    json rep = {{"i0", threshold_indicator(g)},
                {"max_C_drift", traj.max_C_drift},
                {"max_D_drift", traj.max_D_drift},
                {"blowup", nullptr}};
    if (traj.blowup)
        rep["blowup"] = {{"t_lo", traj.blowup->t_lo}, {"t_hi", traj.blowup->t_hi}};
    write_report(cfg, rep);
    return 0;
}

int run_period(const ScenarioConfig& cfg) {
    std::vector<double> thetas = cfg.theta0_values;
    if (thetas.empty())
        for (int i = 1; i <= 10; ++i) thetas.push_back(0.1 * i);
    std::string csv = "theta0,T_bar,err_estimate,T_bar_times_k_over_pi\n";
    for (const double th : thetas) {
        const PeriodResult pr = period_quadrature(th, cfg.k, cfg.quad_tol);
        csv += fmt_double(th) + ',' + fmt_double(pr.T_bar) + ',' +
               fmt_double(pr.quadrature_error_estimate) + ',' +
               fmt_double(pr.T_bar * cfg.k / M_PI) + "\n";
    }
    write_file_atomic(out_path(cfg, "period_sweep.csv"), csv);
    write_report(cfg, {{"theta0_count", thetas.size()},
                       {"inertial_period", M_PI / cfg.k}});
    return 0;
}

int run_flowmap(const ScenarioConfig& cfg) {
    const FieldSample fs = sample_field(cfg.field, cfg.alpha0);
    const GradientState g = grad_analysis(fs.grad, cfg.k);
    const OrbitDescriptor od = orbit_descriptor(cfg.alpha0, fs.U0, cfg.k);
    const auto tsing = first_singularity(g.omega, g.d, g.det, cfg.k);

    const int nsamples = 257;
    std::string csv = "t,X1,X2,U1,U2,det_scaled\n";
    for (int i = 0; i < nsamples; ++i) {
        const double t = cfg.t_end * i / (nsamples - 1);
        const FlowMapState st = flow_map(cfg.alpha0, fs.U0, cfg.k, t);
        const double det = jacobian_det(g.omega, g.d, g.det, cfg.k, t) / (4 * cfg.k * cfg.k);
        csv += fmt_double(t) + ',' + fmt_double(st.X[0]) + ',' + fmt_double(st.X[1]) + ',' +
               fmt_double(st.Xdot[0]) + ',' + fmt_double(st.Xdot[1]) + ',' + fmt_double(det) +
               "\n";
    }
    write_file_atomic(out_path(cfg, "path.csv"), csv);

    json rep = {{"orbit", {{"center", json::array({od.center[0], od.center[1]})},
                           {"radius", od.radius},
                           {"period", od.period}}},
                {"i0", threshold_indicator(g)},
                {"first_singularity", tsing ? json(*tsing) : json(nullptr)}};
    write_report(cfg, rep);
    if (cfg.fail_on_supercritical && tsing) return 2;
    return 0;
}

int run_kinetic_check(const ScenarioConfig& cfg) {
    const BgkConfig& kc = cfg.kinetic;
    const double T = kc.temperature;
    VelocityGrid vg;
    vg.center = kc.U0;
    vg.extent = 6.0 * std::sqrt(T);
    vg.n = 128;
    std::vector<double> f(vg.size());
    const double rho = kc.rho_base;
    for (int i = 0; i < vg.n; ++i)
        for (int j = 0; j < vg.n; ++j)
            f[vg.index(i, j)] = maxwellian(rho, kc.U0, T, vg.point(i, j));
    const MomentSet ms = moments(f, vg);
    const ForcingMoments fm = forcing_moments(f, vg, cfg.k);
    const Vec2 JU{kc.U0[1], -kc.U0[0]};
    const Vec2 expected = (-2.0 * cfg.k * ms.rho) * JU;
    write_report(cfg,
                 {{"rho", ms.rho},
                  {"rho_expected", rho},
                  {"momentum", json::array({ms.m[0], ms.m[1]})},
                  {"energy", ms.E},
                  {"forcing_mass", fm.mass},
                  {"forcing_momentum", json::array({fm.momentum[0], fm.momentum[1]})},
                  {"forcing_momentum_expected", json::array({expected[0], expected[1]})},
                  {"forcing_energy", fm.energy}});
    return 0;
}

int run_kinetic_run(const ScenarioConfig& cfg) {
    KineticGrid final_grid;
    const BgkDiagnostics diag = bgk_run(cfg.kinetic, &final_grid);
    std::string csv = "t,mass,mom_x,mom_y,energy,max_balance_residual\n";
    for (std::size_t i = 0; i < diag.t.size(); ++i)
        csv += fmt_double(diag.t[i]) + ',' + fmt_double(diag.mass[i]) + ',' +
               fmt_double(diag.mom_x[i]) + ',' + fmt_double(diag.mom_y[i]) + ',' +
               fmt_double(diag.energy[i]) + ',' + fmt_double(diag.max_balance_residual[i]) + "\n";
    write_file_atomic(out_path(cfg, "diagnostics.csv"), csv);
    write_snapshot(final_grid, out_path(cfg, "moments.snapshot"));
    write_report(cfg, {{"steps", diag.t.size() - 1},
                       {"mass_drift", std::fabs(diag.mass.back() - diag.mass.front())},
                       {"energy_drift_rel",
                        std::fabs(diag.energy.back() - diag.energy.front()) /
                            std::max(diag.energy.front(), 1e-300)}});
    return 0;
}

int run_units(const ScenarioConfig& cfg) {
    json rep;
    if (cfg.units) {
        const UnitsReport ur =
            units_convert(cfg.units->epsilon, cfg.units->L_bar_m, cfg.units->U_bar_mps);
        rep["units"] = {{"k", ur.k},
                        {"Omega_rad_per_s", ur.Omega},
                        {"time_scale_s", ur.time_scale_s},
                        {"inertial_period_scaled", ur.inertial_period_scaled},
                        {"inertial_period_physical_s", ur.inertial_period_physical_s},
                        {"inertial_period_physical_hr", ur.inertial_period_physical_s / 3600.0}};
    } else {
        rep["units"] = {{"k", cfg.k}, {"inertial_period_scaled", M_PI / cfg.k}};
    }
    // reference configurations and the known literature discrepancies
    auto entry = [](double eps, double L, double U) {
        const UnitsReport ur = units_convert(eps, L, U);
        return json{{"epsilon", eps},
                    {"L_bar_m", L},
                    {"U_bar_mps", U},
                    {"computed_period_hr", ur.inertial_period_physical_s / 3600.0}};
    };
    json gulf = entry(0.07, 1e5, 1.0);
    gulf["name"] = "gulf_stream";
    gulf["reference_period_hr"] = 11.7;
    gulf["note"] = "recorded discrepancy: the quoted 11.7 hr figure does not match "
                   "pi/Omega for the listed parameters (computed ~12.2 hr)";
    json weather = entry(0.14, 1e6, 20.0);
    weather["name"] = "weather_system";
    weather["reference_period_hr"] = 12.2;
    weather["note"] = "matches the quoted ~12.2 hr figure";
    json core = entry(2e-7, 3e6, 1e-3);
    core["name"] = "earth_core";
    core["reference_period_hr"] = 11.95;
    core["excluded"] = true;
    core["note"] = "excluded: not reproducible from T = T_bar L_bar/U_bar with the listed "
                   "parameters";
    json jupiter = entry(0.015, 1e7, 1e-3);
    jupiter["name"] = "jupiter_red_spot";
    jupiter["reference_period_hr"] = 5.13;
    jupiter["excluded"] = true;
    jupiter["note"] = "excluded: not reproducible from T = T_bar L_bar/U_bar with the listed "
                      "parameters";
    rep["reference_configurations"] = json::array({gulf, weather, core, jupiter});
    write_report(cfg, rep);
    return 0;
}

} // namespace

int run_scenario(const ScenarioConfig& cfg) {
    switch (cfg.mode) {
        case Mode::Classify: return run_classify(cfg);
        case Mode::Integrate: return run_integrate(cfg);
        case Mode::Period: return run_period(cfg);
        case Mode::Flowmap: return run_flowmap(cfg);
        case Mode::KineticCheck: return run_kinetic_check(cfg);
        case Mode::KineticRun: return run_kinetic_run(cfg);
        case Mode::Units: return run_units(cfg);
    }
    return 1;
}

} // namespace rotorct

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotorct/fields.hpp"
#include "rotorct/kinetic.hpp"
#include "rotorct/spectral_ode.hpp"

namespace rotorct {

struct UnitsReport {
    double k = 0;
    double Omega = 0;                     // rad/s
    double time_scale_s = 0;              // L_bar / U_bar
    double inertial_period_scaled = 0;    // pi/k
    double inertial_period_physical_s = 0;
};

/// k = 1/(2 eps), Omega = U_bar/(2 eps L_bar), physical inertial period pi/Omega.
UnitsReport units_convert(double epsilon, double L_bar_m, double U_bar_mps);

enum class Mode { Classify, Integrate, Period, Flowmap, KineticCheck, KineticRun, Units };

struct UnitsInput {
    double epsilon = 0;
    double L_bar_m = 0;
    double U_bar_mps = 0;
};

struct ScenarioConfig {
    Mode mode = Mode::Classify;
    FieldSpec field;
    double k = 0;                       // resolved from "k" or the units triple
    std::optional<UnitsInput> units;
    Lattice grid{0, 2 * M_PI, 0, 2 * M_PI, 17, 17};
    Vec2 alpha0{0, 0};
    double t_end = 2 * M_PI;
    SolverConfig solver;
    std::vector<double> theta0_values;
    double quad_tol = 1e-12;
    BgkConfig kinetic;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    bool fail_on_supercritical = false;
};

/// Parses the JSON scenario text; throws ConfigInvalid with a field diagnostic.
ScenarioConfig parse_config(const std::string& json_text);

/// Inverse of parse_config (round-trip stable).
std::string serialize_config(const ScenarioConfig& cfg);

/// Dispatches to the owning module and writes artifacts atomically under
/// cfg.out_dir. Returns 0 on success, 2 when fail_on_supercritical is set and
/// the verdict is not strictly subcritical.
int run_scenario(const ScenarioConfig& cfg);

/// Atomic file write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace rotorct

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rotorct/errors.hpp"
#include "rotorct/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rotorct::ConfigInvalid("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotating-convection threshold / spectral-dynamics toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false, fail_on_super = false;

    const std::vector<std::string> modes = {"classify", "integrate",     "period", "flowmap",
                                            "kinetic-check", "kinetic-run", "units"};
    for (const std::string& mode : modes) {
        CLI::App* sub = app.add_subcommand(mode);
        sub->add_option("--config", config_path, "scenario config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config out_dir)");
        sub->add_option("--seed", seed, "random seed override")->each([&](const std::string&) {
            have_seed = true;
        });
        sub->add_flag("--fail-on-supercritical", fail_on_super,
                      "exit 2 when the verdict is not strictly subcritical");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        rotorct::ScenarioConfig cfg = rotorct::parse_config(read_file(config_path));
        const std::string mode = app.get_subcommands().front()->get_name();
        // the subcommand wins over the config's mode field
        rotorct::ScenarioConfig reparsed = cfg;
        if (mode == "classify") reparsed.mode = rotorct::Mode::Classify;
        else if (mode == "integrate") reparsed.mode = rotorct::Mode::Integrate;
        else if (mode == "period") reparsed.mode = rotorct::Mode::Period;
        else if (mode == "flowmap") reparsed.mode = rotorct::Mode::Flowmap;
        else if (mode == "kinetic-check") reparsed.mode = rotorct::Mode::KineticCheck;
        else if (mode == "kinetic-run") reparsed.mode = rotorct::Mode::KineticRun;
        else reparsed.mode = rotorct::Mode::Units;
        if (!out_dir.empty()) reparsed.out_dir = out_dir;
        if (have_seed) reparsed.seed = seed;
        if (fail_on_super) reparsed.fail_on_supercritical = true;
        return rotorct::run_scenario(reparsed);
    } catch (const rotorct::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

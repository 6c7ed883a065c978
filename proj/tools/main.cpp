#include "actm_cli/commands.hpp"
#include "actm_cli/config.hpp"

#include "actm/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    using namespace actm::cli;

    CLI::App app{"Adjustable constant-torque mechanism design toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string targets;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    auto *seed_opt = app.add_option("--seed", seed, "GA random seed");
    auto *out_opt = app.add_option("--out", out_dir, "output directory");
    auto *targets_opt = app.add_option("--targets", targets, "comma-separated target torques in mN·m");

    auto *validate = app.add_subcommand("validate-fem", "run the beam FEM validation suite");
    auto *optimize = app.add_subcommand("optimize", "GA search for the compliant element shape");
    auto *synthesize = app.add_subcommand("synthesize", "preload calibration and net torque per target");
    auto *sweep = app.add_subcommand("sweep", "re-run synthesis over a parameter range");
    std::string parameter;
    std::string values;
    sweep->add_option("parameter", parameter, "w, R, k or width")->required();
    sweep->add_option("values", values, "comma-separated values (mm, mm, mN·m/deg or mm)")->required();

    for (auto *sub : {validate, optimize, synthesize, sweep}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    ProjectConfig config;
    try {
        config = config_path.empty() ? parse_config("{}") : load_config(config_path);
        if (*seed_opt) {
            config.ga.rng_seed = seed;
        }
        if (*out_opt) {
            config.output_dir = out_dir;
        }
        if (*targets_opt) {
            config.targets_mNm = parse_list(targets);
        }
        config.validate();
    } catch (const actm::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (*validate) {
        return cmd_validate_fem(config, std::cout);
    }
    if (*optimize) {
        return cmd_optimize(config, std::cout);
    }
    if (*synthesize) {
        return cmd_synthesize(config, std::cout);
    }
    std::vector<double> list;
    try {
        list = parse_list(values);
    } catch (const actm::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    return cmd_sweep(config, parameter, list, std::cout);
}

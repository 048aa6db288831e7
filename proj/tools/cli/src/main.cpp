#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include <degenpde/errors.hpp>

#include "degenpde_cli/commands.hpp"

using namespace degenpde::cli;

int main(int argc, char** argv) {
    CLI::App app{"Self-similar analysis and radial solver for doubly nonlinear degenerate parabolic problems"};
    app.require_subcommand(1);

    const std::map<std::string, Command> commands = {
        {"analyze", Command::analyze},
        {"profile", Command::profile},
        {"solve", Command::solve},
        {"verify", Command::verify},
    };
    std::string config_path;
    std::string out_dir = ".";
    long long seed = -1;
    for (const auto& [name, cmd] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (created if missing)");
        sub->add_option("--seed", seed, "Seed for randomized checks")->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return exit_config_error;
    }
    cfg.command = commands.at(app.get_subcommands().front()->get_name());
    cfg.output_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    try {
        return dispatch(cfg, std::cout);
    } catch (const degenpde::UndefinedConstantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_solver_failure;
    }
}

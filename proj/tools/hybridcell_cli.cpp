// Batch front end: one subcommand per run, CSV files into --out.

#include "hybridcell/commands.hpp"
#include "hybridcell/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

hybridcell::RunConfig resolve(const std::string& path, const std::optional<std::uint64_t>& seed) {
    auto config = path.empty() ? hybridcell::RunConfig{} : hybridcell::load_config(path);
    if (seed)
        config.sim.sim.seed = *seed;
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid WLAN/UMTS cell: admission-control SMDP and AP-joining game"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "key = value config file (defaults when omitted)");
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "override sim.seed");

    auto* curves = app.add_subcommand("throughput-curves", "AP and NodeB throughput curves");
    auto* solve = app.add_subcommand("solve-smdp", "optimal admission policy and value function");
    auto* equilibrium = app.add_subcommand("equilibrium", "threshold equilibrium of the AP-joining game");
    auto* staircase = app.add_subcommand("staircase", "equilibrium threshold against the common arrival rate");
    std::string grid;
    staircase->add_option("--grid", grid, "start:stop:count override of the game.sweep_* keys");
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo check of a solver output");
    std::string target = "smdp";
    simulate->add_option("--target", target, "smdp or game")->check(CLI::IsMember({"smdp", "game"}));

    for (auto* sub : {curves, solve, equilibrium, staircase, simulate}) {
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "override sim.seed");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = resolve(config_path, seed);
        if (curves->parsed())
            hybridcell::cmd_throughput_curves(config, out, std::cout);
        else if (solve->parsed())
            hybridcell::cmd_solve_smdp(config, out, std::cout);
        else if (equilibrium->parsed())
            hybridcell::cmd_equilibrium(config, out, std::cout);
        else if (staircase->parsed())
            hybridcell::cmd_staircase(config, grid.empty() ? std::nullopt : std::optional(hybridcell::parse_grid(grid)),
                                      out, std::cout);
        else
            hybridcell::cmd_simulate(config, hybridcell::parse_sim_target(target), out, std::cout);
    } catch (const hybridcell::Error& e) {
        std::cerr << "error [" << hybridcell::category_name(e.category()) << "]: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error [internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

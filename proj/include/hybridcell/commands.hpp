#pragma once

#include "hybridcell/config.hpp"
#include "hybridcell/game.hpp"
#include "hybridcell/smdp.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

namespace hybridcell {

/// The configured NodeB table: the built-in rows or the CSV override.
umts::UmtsTable load_table(const RunConfig& config);

smdp::SmdpModel build_smdp_model(const RunConfig& config);

/// Game inputs; tau comes from game.tau, or from the NodeB table when it is 0.
game::GameConfig build_game_config(const RunConfig& config);

/// "start:stop:count" with count >= 1; ConfigError otherwise.
std::vector<double> parse_grid(const std::string& text);
std::vector<double> linear_grid(double start, double stop, int count);

/// Start states for the discounted-reward check, alternating between the
/// diagonal and the anti-diagonal of the state grid, without duplicates.
std::vector<smdp::HybridState> sample_states(const smdp::SmdpModel& model, int count);

enum class SimTarget { Smdp, Game };
SimTarget parse_sim_target(const std::string& text);

// Each command writes its CSV files and effective_config.txt into `out`
// (created if missing) and a short human-readable summary to `report`.

void cmd_throughput_curves(const RunConfig& config, const std::filesystem::path& out, std::ostream& report);
void cmd_solve_smdp(const RunConfig& config, const std::filesystem::path& out, std::ostream& report);
void cmd_equilibrium(const RunConfig& config, const std::filesystem::path& out, std::ostream& report);
void cmd_staircase(const RunConfig& config, const std::optional<std::vector<double>>& grid,
                   const std::filesystem::path& out, std::ostream& report);
void cmd_simulate(const RunConfig& config, SimTarget target, const std::filesystem::path& out, std::ostream& report);

} // namespace hybridcell

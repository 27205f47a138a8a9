#include "hybridcell/commands.hpp"

#include "hybridcell/errors.hpp"
#include "hybridcell/format.hpp"
#include "hybridcell/server_model.hpp"
#include "hybridcell/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hybridcell {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(path.string(), "cannot open for writing");
    out << content;
    out.flush();
    if (!out)
        throw IoError(path.string(), "write failed");
}

void prepare(const RunConfig& config, const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec)
        throw IoError(out.string(), "cannot create output directory: " + ec.message());
    write_file(out / "effective_config.txt", dump_config(config));
}

std::shared_ptr<const ServerModel> make_server(bool ap, const RunConfig& config, const umts::UmtsTable& table) {
    if (ap)
        return std::make_shared<ApServer>(wlan::WlanCell(config.wlan));
    return std::make_shared<NodeBServer>(table, config.umts);
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(int v) { return format_number(v); }

std::string label(const smdp::SmdpModel& model, smdp::HybridState s) {
    return fmt(model.first().mobiles(s.first)) + ":" + fmt(model.second().mobiles(s.second));
}

std::string z_score(double solver, const sim::Estimate& e) {
    const double diff = e.mean - solver;
    if (e.std_error > 0.0)
        return fmt(diff / e.std_error);
    return diff == 0.0 ? "0" : (diff > 0.0 ? "inf" : "-inf");
}

} // namespace

umts::UmtsTable load_table(const RunConfig& config) {
    if (config.umts_table.empty())
        return umts::UmtsTable::builtin();
    return umts::UmtsTable::from_csv(config.umts_table);
}

smdp::SmdpModel build_smdp_model(const RunConfig& config) {
    config.validate();
    const auto table = load_table(config);
    const bool first_ap = config.setup != smdp::Setup::NodebNodeb;
    const bool second_ap = config.setup == smdp::Setup::ApAp;
    return smdp::SmdpModel(make_server(first_ap, config, table), make_server(second_ap, config, table),
                           config.streams, config.smdp);
}

game::GameConfig build_game_config(const RunConfig& config) {
    config.validate();
    const double tau = config.game.tau > 0.0 ? config.game.tau : game::tau_worst_case(load_table(config), config.umts);
    return game::make_game_config(wlan::WlanCell(config.wlan), config.game.lambda_ap, config.game.lambda_ap3g, tau);
}

std::vector<double> linear_grid(double start, double stop, int count) {
    if (count < 1)
        throw ConfigError("grid: count must be >= 1");
    if (count > 1 && !(stop > start))
        throw ConfigError("grid: stop must exceed start when count > 1");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    return grid;
}

std::vector<double> parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos)
        throw ConfigError("grid '" + text + "': expected start:stop:count");
    const auto start = parse_number<double>(std::string_view(text).substr(0, a));
    const auto stop = parse_number<double>(std::string_view(text).substr(a + 1, b - a - 1));
    const auto count = parse_number<int>(std::string_view(text).substr(b + 1));
    if (!start || !stop || !count)
        throw ConfigError("grid '" + text + "': expected start:stop:count");
    return linear_grid(*start, *stop, *count);
}

std::vector<smdp::HybridState> sample_states(const smdp::SmdpModel& model, int count) {
    const int n1 = model.first_count() - 1;
    const int n2 = model.second_count() - 1;
    std::vector<smdp::HybridState> states;
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        const int s1 = static_cast<int>(std::lround(t * n1));
        const int s2 = static_cast<int>(std::lround((i % 2 == 0 ? t : 1.0 - t) * n2));
        const smdp::HybridState s{s1, s2};
        if (std::find(states.begin(), states.end(), s) == states.end())
            states.push_back(s);
    }
    return states;
}

SimTarget parse_sim_target(const std::string& text) {
    if (text == "smdp")
        return SimTarget::Smdp;
    if (text == "game")
        return SimTarget::Game;
    throw ConfigError("unknown simulation target '" + text + "' (expected smdp or game)");
}

void cmd_throughput_curves(const RunConfig& config, const fs::path& out, std::ostream& report) {
    config.validate();
    prepare(config, out);

    const wlan::WlanCell cell(config.wlan);
    std::string ap = "m_c,theta_per_mobile_bps,aggregate_bps\n";
    for (int m = 0; m <= config.wlan.capacity; ++m) {
        const double theta = m == 0 ? 0.0 : cell.theta_per_mobile(m);
        ap += fmt(m) + "," + fmt(theta) + "," + fmt(cell.aggregate_throughput(m)) + "\n";
    }
    write_file(out / "ap_curve.csv", ap);

    const auto table = load_table(config);
    std::string nodeb = "N,eta,log_eta,theta_bps,aggregate_bps\n";
    int peak = 0;
    double best = -1.0;
    for (const auto& row : table.rows()) {
        if (row.mobiles > config.umts.capacity)
            continue;
        const double aggregate = row.mobiles * row.theta_bps;
        if (aggregate > best) {
            best = aggregate;
            peak = row.mobiles;
        }
        nodeb += fmt(row.mobiles) + "," + fmt(row.eta) + "," + fmt(row.log_eta) + "," + fmt(row.theta_bps) + "," +
                 fmt(aggregate) + "\n";
    }
    write_file(out / "nodeb_curve.csv", nodeb);
    report << "ap_curve.csv: m_c = 0.." << config.wlan.capacity << "\n"
           << "nodeb_curve.csv: aggregate peak at N = " << peak << " (" << fmt(best) << " bps)\n";
}

void cmd_solve_smdp(const RunConfig& config, const fs::path& out, std::ostream& report) {
    const auto model = build_smdp_model(config);
    prepare(config, out);
    const auto solution = smdp::value_iterate(model);

    std::string value = "s1,s2,value\n";
    std::string policy = "s1,s2,stream,action\n";
    for (int i = 0; i < model.state_count(); ++i) {
        const auto s = model.state(i);
        const std::string key = fmt(model.first().mobiles(s.first)) + "," + fmt(model.second().mobiles(s.second));
        value += key + "," + fmt(solution.value.at(s.first, s.second)) + "\n";
        for (const auto stream : smdp::kStreams)
            policy += key + "," + fmt(static_cast<int>(stream)) + "," +
                      fmt(static_cast<int>(solution.policy.at(s.first, s.second, stream))) + "\n";
    }
    write_file(out / "value.csv", value);
    write_file(out / "policy.csv", policy);

    const auto structure = smdp::policy_structure_report(model, solution.policy, config.setup);
    write_file(out / "structure.txt", structure.to_text(model));
    report << "setup " << smdp::to_string(config.setup) << ": converged in " << solution.iterations
           << " iterations (last delta " << fmt(solution.deltas.empty() ? 0.0 : solution.deltas.back())
           << "), uniformization rate " << fmt(model.uniformization_rate()) << "\n";
}

void cmd_equilibrium(const RunConfig& config, const fs::path& out, std::ostream& report) {
    const auto game_config = build_game_config(config);
    prepare(config, out);
    const auto eq = game::find_equilibrium(game_config);
    const auto thresholds = game::threshold_service_times(game_config);

    std::ostringstream text;
    text << "equilibrium [L*, q*] = [" << eq.policy.level << ", " << fmt(eq.policy.q) << "]\n"
         << "g* = " << fmt(eq.policy.g()) << "\n"
         << "branch = " << game::to_string(eq.branch) << "\n"
         << "tau = " << fmt(game_config.tau) << "\n"
         << "L  V(L,[L,1])\n";
    std::string csv = "L,service_time\n";
    for (std::size_t l = 0; l < thresholds.size(); ++l) {
        text << l << "  " << fmt(thresholds[l]) << "\n";
        csv += fmt(static_cast<int>(l)) + "," + fmt(thresholds[l]) + "\n";
    }
    write_file(out / "equilibrium.txt", text.str());
    write_file(out / "threshold_values.csv", csv);
    report << text.str();
}

void cmd_staircase(const RunConfig& config, const std::optional<std::vector<double>>& grid, const fs::path& out,
                   std::ostream& report) {
    const auto game_config = build_game_config(config);
    const auto lambdas =
        grid ? *grid : linear_grid(config.game.sweep_start, config.game.sweep_stop, config.game.sweep_points);
    prepare(config, out);
    const auto points = game::staircase_sweep(game_config, lambdas);

    std::string csv = "lambda_ap3g,L,q,g\n";
    for (const auto& p : points)
        csv += fmt(p.lambda_ap3g) + "," + fmt(p.policy.level) + "," + fmt(p.policy.q) + "," + fmt(p.policy.g()) + "\n";
    write_file(out / "staircase.csv", csv);
    report << "staircase.csv: " << points.size() << " points, g from " << fmt(points.front().policy.g()) << " to "
           << fmt(points.back().policy.g()) << " (tau " << fmt(game_config.tau) << ")\n";
}

void cmd_simulate(const RunConfig& config, SimTarget target, const fs::path& out, std::ostream& report) {
    std::string csv = "state,solver_value,sim_mean,sim_stderr,z_score\n";
    double worst = 0.0;
    int rows = 0;
    auto add = [&](const std::string& state, double solver, const sim::Estimate& e) {
        csv += state + "," + fmt(solver) + "," + fmt(e.mean) + "," + fmt(e.std_error) + "," + z_score(solver, e) + "\n";
        if (e.std_error > 0.0)
            worst = std::max(worst, std::abs(e.mean - solver) / e.std_error);
        else if (e.mean != solver)
            worst = std::numeric_limits<double>::infinity();
        ++rows;
    };

    if (target == SimTarget::Smdp) {
        const auto model = build_smdp_model(config);
        prepare(config, out);
        const auto solution = smdp::value_iterate(model);
        const auto starts = sample_states(model, config.sim.sample_states);
        const auto estimates = sim::simulate_discounted_reward(solution.policy, model, config.sim.sim, starts);
        for (const auto& e : estimates)
            add(label(model, e.state), solution.value.at(e.state.first, e.state.second), e.estimate);
        report << "horizon " << estimates.front().horizon << " stages, truncation bound "
               << fmt(estimates.front().truncation_bound) << "\n";
    } else {
        const auto game_config = build_game_config(config);
        prepare(config, out);
        const game::ThresholdPolicy policy{config.sim.game_level, config.sim.game_q};
        const auto v = game::expected_service_time(policy, game_config);
        for (int m = 0; m < game_config.capacity; ++m)
            add(fmt(m), v[static_cast<std::size_t>(m)],
                sim::simulate_tagged_service_time(policy, m, game_config, config.sim.sim));
    }
    write_file(out / "simulation.csv", csv);
    report << "simulation.csv: " << rows << " states, max |z| = " << fmt(worst) << "\n";
}

} // namespace hybridcell

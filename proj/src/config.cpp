#include "hybridcell/config.hpp"

#include "hybridcell/errors.hpp"
#include "hybridcell/format.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace hybridcell {

namespace {

struct Key {
    std::string name;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
    const auto v = parse_number<T>(text);
    if (!v)
        throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
    return *v;
}

template <class Get>
Key real_key(std::string name, Get ref) {
    return {name, [ref](const RunConfig& c) { return format_number(ref(const_cast<RunConfig&>(c))); },
            [ref, name](RunConfig& c, const std::string& v) { ref(c) = parse_value<double>(name, v); }};
}

template <class Get>
Key int_key(std::string name, Get ref) {
    return {name, [ref](const RunConfig& c) { return format_number(ref(const_cast<RunConfig&>(c))); },
            [ref, name](RunConfig& c, const std::string& v) { ref(c) = parse_value<int>(name, v); }};
}

const std::vector<Key>& registry() {
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        k.push_back({"setup", [](const RunConfig& c) { return smdp::to_string(c.setup); },
                     [](RunConfig& c, const std::string& v) { c.setup = smdp::parse_setup(v); }});
        k.push_back({"traffic.zeta", [](const RunConfig& c) { return format_number(c.wlan.zeta); },
                     [](RunConfig& c, const std::string& v) {
                         c.wlan.zeta = c.umts.zeta = parse_value<double>("traffic.zeta", v);
                     }});

        k.push_back(real_key("wlan.l_tcp", [](RunConfig& c) -> double& { return c.wlan.l_tcp; }));
        k.push_back(real_key("wlan.l_mac", [](RunConfig& c) -> double& { return c.wlan.l_mac; }));
        k.push_back(real_key("wlan.l_iph", [](RunConfig& c) -> double& { return c.wlan.l_iph; }));
        k.push_back(real_key("wlan.l_ack", [](RunConfig& c) -> double& { return c.wlan.l_ack; }));
        k.push_back(real_key("wlan.l_rts", [](RunConfig& c) -> double& { return c.wlan.l_rts; }));
        k.push_back(real_key("wlan.l_cts", [](RunConfig& c) -> double& { return c.wlan.l_cts; }));
        k.push_back(real_key("wlan.r_data", [](RunConfig& c) -> double& { return c.wlan.r_data; }));
        k.push_back(real_key("wlan.r_control", [](RunConfig& c) -> double& { return c.wlan.r_control; }));
        k.push_back(real_key("wlan.t_p", [](RunConfig& c) -> double& { return c.wlan.t_p; }));
        k.push_back(real_key("wlan.t_phy", [](RunConfig& c) -> double& { return c.wlan.t_phy; }));
        k.push_back(real_key("wlan.t_difs", [](RunConfig& c) -> double& { return c.wlan.t_difs; }));
        k.push_back(real_key("wlan.t_sifs", [](RunConfig& c) -> double& { return c.wlan.t_sifs; }));
        k.push_back(real_key("wlan.t_slot", [](RunConfig& c) -> double& { return c.wlan.t_slot; }));
        k.push_back(real_key("wlan.cw_min", [](RunConfig& c) -> double& { return c.wlan.cw_min; }));
        k.push_back(int_key("wlan.retry_limit", [](RunConfig& c) -> int& { return c.wlan.retry_limit; }));
        k.push_back(real_key("wlan.b0", [](RunConfig& c) -> double& { return c.wlan.b0; }));
        k.push_back(real_key("wlan.backoff_multiplier",
                             [](RunConfig& c) -> double& { return c.wlan.backoff_multiplier; }));
        k.push_back(real_key("wlan.w_star", [](RunConfig& c) -> double& { return c.wlan.w_star; }));
        k.push_back(int_key("wlan.capacity", [](RunConfig& c) -> int& { return c.wlan.capacity; }));

        k.push_back(real_key("umts.chip_rate", [](RunConfig& c) -> double& { return c.umts.chip_rate; }));
        k.push_back(real_key("umts.alpha_bar", [](RunConfig& c) -> double& { return c.umts.alpha_bar; }));
        k.push_back(real_key("umts.i_bar", [](RunConfig& c) -> double& { return c.umts.i_bar; }));
        k.push_back(real_key("umts.eta_max", [](RunConfig& c) -> double& { return c.umts.eta_max; }));
        k.push_back(real_key("umts.theta_min", [](RunConfig& c) -> double& { return c.umts.theta_min; }));
        k.push_back(int_key("umts.capacity", [](RunConfig& c) -> int& { return c.umts.capacity; }));
        k.push_back({"umts.table", [](const RunConfig& c) { return c.umts_table; },
                     [](RunConfig& c, const std::string& v) { c.umts_table = v; }});

        k.push_back(real_key("streams.lambda_first", [](RunConfig& c) -> double& { return c.streams.lambda_first; }));
        k.push_back(real_key("streams.lambda_second", [](RunConfig& c) -> double& { return c.streams.lambda_second; }));
        k.push_back(real_key("streams.lambda_common", [](RunConfig& c) -> double& { return c.streams.lambda_common; }));
        k.push_back(real_key("streams.fee_first", [](RunConfig& c) -> double& { return c.streams.fee_first; }));
        k.push_back(real_key("streams.fee_second", [](RunConfig& c) -> double& { return c.streams.fee_second; }));
        k.push_back(real_key("streams.fee_common_first",
                             [](RunConfig& c) -> double& { return c.streams.fee_common_to_first; }));
        k.push_back(real_key("streams.fee_common_second",
                             [](RunConfig& c) -> double& { return c.streams.fee_common_to_second; }));

        k.push_back(real_key("smdp.gamma", [](RunConfig& c) -> double& { return c.smdp.gamma; }));
        k.push_back(real_key("smdp.beta", [](RunConfig& c) -> double& { return c.smdp.beta; }));
        k.push_back(real_key("smdp.epsilon", [](RunConfig& c) -> double& { return c.smdp.epsilon; }));
        k.push_back(int_key("smdp.max_iterations", [](RunConfig& c) -> int& { return c.smdp.max_iterations; }));

        k.push_back(real_key("game.lambda_ap", [](RunConfig& c) -> double& { return c.game.lambda_ap; }));
        k.push_back(real_key("game.lambda_ap3g", [](RunConfig& c) -> double& { return c.game.lambda_ap3g; }));
        k.push_back(real_key("game.tau", [](RunConfig& c) -> double& { return c.game.tau; }));
        k.push_back(real_key("game.sweep_start", [](RunConfig& c) -> double& { return c.game.sweep_start; }));
        k.push_back(real_key("game.sweep_stop", [](RunConfig& c) -> double& { return c.game.sweep_stop; }));
        k.push_back(int_key("game.sweep_points", [](RunConfig& c) -> int& { return c.game.sweep_points; }));

        k.push_back({"sim.seed", [](const RunConfig& c) { return std::to_string(c.sim.sim.seed); },
                     [](RunConfig& c, const std::string& v) {
                         c.sim.sim.seed = parse_value<std::uint64_t>("sim.seed", v);
                     }});
        k.push_back(int_key("sim.replications", [](RunConfig& c) -> int& { return c.sim.sim.replications; }));
        k.push_back(int_key("sim.horizon_stages", [](RunConfig& c) -> int& { return c.sim.sim.horizon_stages; }));
        k.push_back(real_key("sim.confidence", [](RunConfig& c) -> double& { return c.sim.sim.confidence; }));
        k.push_back(int_key("sim.sample_states", [](RunConfig& c) -> int& { return c.sim.sample_states; }));
        k.push_back(int_key("sim.game_level", [](RunConfig& c) -> int& { return c.sim.game_level; }));
        k.push_back(real_key("sim.game_q", [](RunConfig& c) -> double& { return c.sim.game_q; }));
        return k;
    }();
    return keys;
}

} // namespace

void RunConfig::validate() const {
    wlan.validate();
    umts.validate();
    streams.validate();
    smdp.validate();
    sim.sim.validate();
    if (wlan.zeta != umts.zeta)
        throw ConfigError("config: WLAN and UMTS file-size parameters differ");
    if (game.lambda_ap < 0.0 || game.lambda_ap3g < 0.0)
        throw ConfigError("config: game arrival rates must be >= 0");
    if (game.tau < 0.0)
        throw ConfigError("config: game.tau must be >= 0 (0 = derive from the NodeB table)");
    if (game.sweep_points < 1 || (game.sweep_points > 1 && !(game.sweep_stop > game.sweep_start)))
        throw ConfigError("config: sweep needs >= 1 point and sweep_stop > sweep_start");
    if (sim.sample_states < 1)
        throw ConfigError("config: sim.sample_states must be >= 1");
    if (sim.game_level < 0 || sim.game_level > wlan.capacity || sim.game_q < 0.0 || sim.game_q > 1.0)
        throw ConfigError("config: sim.game_level/game_q must describe a threshold policy on the AP");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = registry();
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return k.name == key; });
        if (it == keys.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ConfigError(where + ": key '" + key + "' given twice");
        try {
            it->set(config, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    // Common-stream fee toward the second network defaults to 5.65 only
    // for the hybrid AP-NodeB cell; homogeneous setups use 5/5.
    if (!seen.count("streams.fee_common_second") && config.setup != smdp::Setup::ApNodeb)
        config.streams.fee_common_to_second = 5.0;
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path, "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string dump_config(const RunConfig& config) {
    std::string out;
    for (const Key& k : registry())
        out += k.name + " = " + k.get(config) + "\n";
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> names;
    for (const Key& k : registry())
        names.push_back(k.name);
    return names;
}

} // namespace hybridcell

#pragma once

#include "hybridcell/sim.hpp"
#include "hybridcell/smdp.hpp"
#include "hybridcell/umts_model.hpp"
#include "hybridcell/wlan_model.hpp"

#include <string>
#include <vector>

namespace hybridcell {

struct GameSettings {
    double lambda_ap = 0.03;
    double lambda_ap3g = 0.01;
    double tau = 0.0;        ///< 0 derives tau from the NodeB table
    double sweep_start = 0.0;
    double sweep_stop = 10.0;
    int sweep_points = 101;

    bool operator==(const GameSettings&) const = default;
};

struct SimSettings {
    sim::SimConfig sim;
    int sample_states = 5;   ///< start states for the discounted-reward check
    int game_level = 5;      ///< [L, q] profile for the tagged-mobile check
    double game_q = 0.5;

    bool operator==(const SimSettings&) const = default;
};

/**
 * Everything one CLI run needs. The file format is flat `key = value` lines
 * with dotted section prefixes; `#` starts a comment. Unknown or repeated
 * keys are errors and missing keys keep their defaults. The traffic.zeta key
 * sets the file-size parameter of both networks.
 */
struct RunConfig {
    smdp::Setup setup = smdp::Setup::ApNodeb;
    wlan::WlanParams wlan;
    umts::UmtsParams umts;
    std::string umts_table;  ///< optional CSV overriding the built-in table
    smdp::StreamConfig streams;
    smdp::SmdpConfig smdp;
    GameSettings game;
    SimSettings sim;

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Every key with its effective value; parse_config(dump_config(c)) == c.
std::string dump_config(const RunConfig& config);

std::vector<std::string> config_keys();

} // namespace hybridcell

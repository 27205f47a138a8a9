#pragma once

#include "hybridcell/server_model.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hybridcell::smdp {

enum class Setup { ApAp, NodebNodeb, ApNodeb };

std::string to_string(Setup setup);
/// Accepts "ap-ap", "nodeb-nodeb", "ap-nodeb"; ConfigError otherwise.
Setup parse_setup(const std::string& text);

enum class Stream : int { First = 0, Second = 1, Common = 2 };
inline constexpr std::array<Stream, 3> kStreams{Stream::First, Stream::Second, Stream::Common};

/// Action codes as written to policy files: 0 reject, 1 first, 2 second.
enum class Action : std::uint8_t { Reject = 0, RouteFirst = 1, RouteSecond = 2 };

bool is_legal(Stream stream, Action action);

struct StreamConfig {
    double lambda_first = 0.03;
    double lambda_second = 0.03;
    double lambda_common = 0.01;
    double fee_first = 0.0;
    double fee_second = 0.0;
    double fee_common_to_first = 5.0;
    double fee_common_to_second = 5.65;

    void validate() const;
    [[nodiscard]] double total_arrival_rate() const noexcept {
        return lambda_first + lambda_second + lambda_common;
    }
    [[nodiscard]] double rate(Stream stream) const noexcept;

    bool operator==(const StreamConfig&) const = default;
};

struct SmdpConfig {
    double gamma = 0.8;   ///< discount per uniformized event
    double beta = 1e-6;   ///< currency per bit/s of aggregate throughput
    double epsilon = 1e-9;
    int max_iterations = 100000;

    /// gamma = 0 is accepted (one-stage problem).
    void validate() const;

    bool operator==(const SmdpConfig&) const = default;
};

struct HybridState {
    int first = 0;
    int second = 0;
    bool operator==(const HybridState&) const = default;
};

/// Two servers, the arrival streams and the discounting, with the
/// uniformization rate fixed at construction.
class SmdpModel {
public:
    SmdpModel(std::shared_ptr<const ServerModel> first, std::shared_ptr<const ServerModel> second,
              StreamConfig streams, SmdpConfig config);

    [[nodiscard]] const ServerModel& first() const noexcept { return *first_; }
    [[nodiscard]] const ServerModel& second() const noexcept { return *second_; }
    [[nodiscard]] const StreamConfig& streams() const noexcept { return streams_; }
    [[nodiscard]] const SmdpConfig& config() const noexcept { return config_; }
    [[nodiscard]] double uniformization_rate() const noexcept { return rate_; }

    [[nodiscard]] int first_count() const noexcept { return first_->state_count(); }
    [[nodiscard]] int second_count() const noexcept { return second_->state_count(); }
    [[nodiscard]] int state_count() const noexcept { return first_count() * second_count(); }
    [[nodiscard]] int index(HybridState s) const noexcept { return s.first * second_count() + s.second; }
    [[nodiscard]] HybridState state(int index) const noexcept {
        return {index / second_count(), index % second_count()};
    }

    /// Successor after taking an action on an arrival (reject keeps the state).
    [[nodiscard]] HybridState successor(HybridState s, Action action) const;

    /// Whether the action admits a mobile (routes to a server that is not full).
    [[nodiscard]] bool admits(HybridState s, Action action) const;

    /// Largest one-stage reward over all states, streams and legal actions.
    [[nodiscard]] double max_stage_reward() const;

private:
    std::shared_ptr<const ServerModel> first_;
    std::shared_ptr<const ServerModel> second_;
    StreamConfig streams_;
    SmdpConfig config_;
    double rate_;
};

/// Lambda = sum of arrival rates + max service rate of each server.
/// ConfigError when it is zero.
double uniformization_rate(const ServerModel& first, const ServerModel& second, const StreamConfig& streams);

/// One-stage reward of taking `action` on an arrival of `stream` in `s`.
/// ContractViolation for an action the stream may not take.
double stage_reward(HybridState s, Stream stream, Action action, const ServerModel& first,
                    const ServerModel& second, const StreamConfig& streams, double beta);

double stage_reward(const SmdpModel& model, HybridState s, Stream stream, Action action);

struct ValueFunction {
    int first_count = 0;
    int second_count = 0;
    std::vector<double> values; ///< row-major over (first, second)

    [[nodiscard]] double at(int s1, int s2) const { return values.at(static_cast<std::size_t>(s1 * second_count + s2)); }
    [[nodiscard]] double sup_norm_distance(const ValueFunction& other) const;
    bool operator==(const ValueFunction&) const = default;
};

ValueFunction zero_value(const SmdpModel& model);

struct PolicyTable {
    int first_count = 0;
    int second_count = 0;
    std::vector<std::array<Action, 3>> actions; ///< row-major over (first, second)

    [[nodiscard]] Action at(int s1, int s2, Stream stream) const {
        return actions.at(static_cast<std::size_t>(s1 * second_count + s2))[static_cast<std::size_t>(stream)];
    }
    bool operator==(const PolicyTable&) const = default;
};

/// Q-values R + gamma V(successor) for each action; empty where illegal.
std::array<std::optional<double>, 3> action_values(const SmdpModel& model, const ValueFunction& v,
                                                   HybridState s, Stream stream);

/**
 * Deterministic argmax over action values. Values within 1e-9 relative of
 * the best are ties; ties prefer an admitting route over rejection, between
 * two admitting routes the server with fewer mobiles, then the first server.
 * A route into a full server ranks below rejection.
 */
Action select_action(const SmdpModel& model, HybridState s, const std::array<std::optional<double>, 3>& q);

/// One application of the uniformized dynamic-programming operator.
ValueFunction bellman_backup(const SmdpModel& model, const ValueFunction& v);

PolicyTable greedy_policy(const SmdpModel& model, const ValueFunction& v);

struct Solution {
    ValueFunction value;
    PolicyTable policy;
    int iterations = 0;
    std::vector<double> deltas; ///< sup-norm change per iteration
};

/// Value iteration from V = 0 until the sup-norm change drops below epsilon.
/// ConvergenceError when max_iterations is reached first.
Solution value_iterate(const SmdpModel& model);

/// Per-stream acceptance threshold along one axis: the number of leading
/// states (from empty) that accept, or -1 if accepting states are not a prefix.
struct ThresholdLine {
    int fixed_state = 0;
    int threshold = 0;
};

struct PolicyStructure {
    Setup setup = Setup::ApNodeb;
    /// Common-stream states with m1 != m2 that admit.
    int off_diagonal_accepting = 0;
    std::vector<HybridState> balancing; ///< routed to the server with fewer mobiles
    std::vector<HybridState> greedy;    ///< routed to the server with more mobiles
    std::vector<HybridState> common_rejects;
    std::vector<ThresholdLine> first_dedicated;  ///< per second-server state
    std::vector<ThresholdLine> second_dedicated; ///< per first-server state
    bool common_mirror_symmetric = false; ///< only computed for homogeneous setups

    [[nodiscard]] std::string to_text(const SmdpModel& model) const;
};

PolicyStructure policy_structure_report(const SmdpModel& model, const PolicyTable& policy, Setup setup);

} // namespace hybridcell::smdp

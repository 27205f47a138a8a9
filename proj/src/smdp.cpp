#include "hybridcell/smdp.hpp"

#include "hybridcell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hybridcell::smdp {

std::string to_string(Setup setup) {
    switch (setup) {
    case Setup::ApAp: return "ap-ap";
    case Setup::NodebNodeb: return "nodeb-nodeb";
    case Setup::ApNodeb: return "ap-nodeb";
    }
    return "?";
}

Setup parse_setup(const std::string& text) {
    if (text == "ap-ap")
        return Setup::ApAp;
    if (text == "nodeb-nodeb")
        return Setup::NodebNodeb;
    if (text == "ap-nodeb")
        return Setup::ApNodeb;
    throw ConfigError("unknown setup '" + text + "' (expected ap-ap, nodeb-nodeb or ap-nodeb)");
}

bool is_legal(Stream stream, Action action) {
    switch (stream) {
    case Stream::First: return action != Action::RouteSecond;
    case Stream::Second: return action != Action::RouteFirst;
    case Stream::Common: return true;
    }
    return false;
}

void StreamConfig::validate() const {
    for (double v : {lambda_first, lambda_second, lambda_common})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError("streams: arrival rates must be finite and >= 0");
    for (double v : {fee_first, fee_second, fee_common_to_first, fee_common_to_second})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError("streams: fees must be finite and >= 0");
}

double StreamConfig::rate(Stream stream) const noexcept {
    switch (stream) {
    case Stream::First: return lambda_first;
    case Stream::Second: return lambda_second;
    case Stream::Common: return lambda_common;
    }
    return 0.0;
}

void SmdpConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw ConfigError("smdp: gamma must lie in [0, 1)");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ConfigError("smdp: beta must be finite and >= 0");
    if (!(epsilon > 0.0))
        throw ConfigError("smdp: epsilon must be positive");
    if (max_iterations < 1)
        throw ConfigError("smdp: max_iterations must be >= 1");
}

double uniformization_rate(const ServerModel& first, const ServerModel& second, const StreamConfig& streams) {
    if (first.state_count() < 1 || second.state_count() < 1)
        throw ConfigError("smdp: server models must have at least one state");
    const double rate = streams.total_arrival_rate() + first.max_service_rate() + second.max_service_rate();
    if (!(rate > 0.0))
        throw ConfigError("smdp: uniformization rate is zero (no arrivals and no service)");
    return rate;
}

SmdpModel::SmdpModel(std::shared_ptr<const ServerModel> first, std::shared_ptr<const ServerModel> second,
                     StreamConfig streams, SmdpConfig config)
    : first_(std::move(first)), second_(std::move(second)), streams_(streams), config_(config) {
    if (!first_ || !second_)
        throw ConfigError("smdp: server models must not be null");
    streams_.validate();
    config_.validate();
    rate_ = smdp::uniformization_rate(*first_, *second_, streams_);
}

HybridState SmdpModel::successor(HybridState s, Action action) const {
    switch (action) {
    case Action::Reject: return s;
    case Action::RouteFirst: return {first_->admit(s.first), s.second};
    case Action::RouteSecond: return {s.first, second_->admit(s.second)};
    }
    return s;
}

bool SmdpModel::admits(HybridState s, Action action) const {
    switch (action) {
    case Action::Reject: return false;
    case Action::RouteFirst: return !first_->is_full(s.first);
    case Action::RouteSecond: return !second_->is_full(s.second);
    }
    return false;
}

double SmdpModel::max_stage_reward() const {
    double best = 0.0;
    for (int i = 0; i < state_count(); ++i)
        for (Stream k : kStreams)
            for (Action a : {Action::Reject, Action::RouteFirst, Action::RouteSecond})
                if (is_legal(k, a))
                    best = std::max(best, stage_reward(*this, state(i), k, a));
    return best;
}

double stage_reward(HybridState s, Stream stream, Action action, const ServerModel& first,
                    const ServerModel& second, const StreamConfig& streams, double beta) {
    if (!is_legal(stream, action))
        throw ContractViolation("smdp: action " + std::to_string(static_cast<int>(action)) +
                                " is not legal for stream " + std::to_string(static_cast<int>(stream)));
    const double here_first = beta * first.aggregate_throughput(s.first);
    const double here_second = beta * second.aggregate_throughput(s.second);
    switch (action) {
    case Action::Reject:
        if (stream == Stream::First)
            return here_first;
        if (stream == Stream::Second)
            return here_second;
        return std::max(here_first, here_second);
    case Action::RouteFirst: {
        if (first.is_full(s.first))
            return here_first;
        const double fee = stream == Stream::Common ? streams.fee_common_to_first : streams.fee_first;
        return fee + beta * first.aggregate_throughput(first.admit(s.first));
    }
    case Action::RouteSecond: {
        if (second.is_full(s.second))
            return here_second;
        const double fee = stream == Stream::Common ? streams.fee_common_to_second : streams.fee_second;
        return fee + beta * second.aggregate_throughput(second.admit(s.second));
    }
    }
    return 0.0;
}

double stage_reward(const SmdpModel& model, HybridState s, Stream stream, Action action) {
    return stage_reward(s, stream, action, model.first(), model.second(), model.streams(), model.config().beta);
}

double ValueFunction::sup_norm_distance(const ValueFunction& other) const {
    if (values.size() != other.values.size())
        throw ContractViolation("value functions have different sizes");
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        d = std::max(d, std::abs(values[i] - other.values[i]));
    return d;
}

ValueFunction zero_value(const SmdpModel& model) {
    return {model.first_count(), model.second_count(),
            std::vector<double>(static_cast<std::size_t>(model.state_count()), 0.0)};
}

namespace {

void check_shape(const SmdpModel& model, const ValueFunction& v) {
    if (v.first_count != model.first_count() || v.second_count != model.second_count() ||
        v.values.size() != static_cast<std::size_t>(model.state_count()))
        throw ContractViolation("smdp: value function does not cover the state space");
}

// Lower rank wins a tie.
int tie_rank(const SmdpModel& model, HybridState s, Action a) {
    if (a == Action::Reject)
        return 2;
    if (!model.admits(s, a))
        return 3;
    const int m1 = model.first().mobiles(s.first);
    const int m2 = model.second().mobiles(s.second);
    if (a == Action::RouteFirst)
        return m1 <= m2 ? 0 : 1;
    return m2 < m1 ? 0 : 1;
}

constexpr double kTieTolerance = 1e-9;

} // namespace

std::array<std::optional<double>, 3> action_values(const SmdpModel& model, const ValueFunction& v,
                                                   HybridState s, Stream stream) {
    std::array<std::optional<double>, 3> q;
    const double gamma = model.config().gamma;
    for (Action a : {Action::Reject, Action::RouteFirst, Action::RouteSecond}) {
        if (!is_legal(stream, a))
            continue;
        const HybridState next = model.successor(s, a);
        q[static_cast<std::size_t>(a)] = stage_reward(model, s, stream, a) + gamma * v.at(next.first, next.second);
    }
    return q;
}

Action select_action(const SmdpModel& model, HybridState s, const std::array<std::optional<double>, 3>& q) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& value : q)
        if (value)
            best = std::max(best, *value);
    const double tol = kTieTolerance * std::max(1.0, std::abs(best));

    Action chosen = Action::Reject;
    int chosen_rank = std::numeric_limits<int>::max();
    for (Action a : {Action::Reject, Action::RouteFirst, Action::RouteSecond}) {
        const auto& value = q[static_cast<std::size_t>(a)];
        if (!value || *value < best - tol)
            continue;
        const int rank = tie_rank(model, s, a);
        if (rank < chosen_rank) {
            chosen = a;
            chosen_rank = rank;
        }
    }
    return chosen;
}

ValueFunction bellman_backup(const SmdpModel& model, const ValueFunction& v) {
    check_shape(model, v);
    const double rate = model.uniformization_rate();
    const double gamma = model.config().gamma;
    const StreamConfig& streams = model.streams();
    const double arrivals = streams.total_arrival_rate();

    ValueFunction out{v.first_count, v.second_count, std::vector<double>(v.values.size())};
    for (int i = 0; i < model.state_count(); ++i) {
        const HybridState s = model.state(i);
        double total = 0.0;
        for (Stream k : kStreams) {
            const double lambda = streams.rate(k);
            if (lambda == 0.0)
                continue;
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& q : action_values(model, v, s, k))
                if (q)
                    best = std::max(best, *q);
            total += lambda / rate * best;
        }
        const double mu1 = model.first().service_rate(s.first);
        const double mu2 = model.second().service_rate(s.second);
        const double idle = rate - arrivals - mu1 - mu2;
        if (idle < -1e-12 * rate)
            throw ConfigError("smdp: negative self-loop weight; uniformization rate too small");
        total += mu1 / rate * gamma * v.at(model.first().depart(s.first), s.second);
        total += mu2 / rate * gamma * v.at(s.first, model.second().depart(s.second));
        total += std::max(idle, 0.0) / rate * gamma * v.at(s.first, s.second);
        out.values[static_cast<std::size_t>(i)] = total;
    }
    return out;
}

PolicyTable greedy_policy(const SmdpModel& model, const ValueFunction& v) {
    check_shape(model, v);
    PolicyTable policy{model.first_count(), model.second_count(), {}};
    policy.actions.resize(static_cast<std::size_t>(model.state_count()));
    for (int i = 0; i < model.state_count(); ++i) {
        const HybridState s = model.state(i);
        for (Stream k : kStreams)
            policy.actions[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                select_action(model, s, action_values(model, v, s, k));
    }
    return policy;
}

Solution value_iterate(const SmdpModel& model) {
    Solution sol;
    ValueFunction v = zero_value(model);
    const SmdpConfig& cfg = model.config();
    double delta = std::numeric_limits<double>::infinity();
    while (sol.iterations < cfg.max_iterations) {
        ValueFunction next = bellman_backup(model, v);
        delta = next.sup_norm_distance(v);
        v = std::move(next);
        ++sol.iterations;
        sol.deltas.push_back(delta);
        if (delta < cfg.epsilon) {
            sol.policy = greedy_policy(model, v);
            sol.value = std::move(v);
            return sol;
        }
    }
    throw ConvergenceError(sol.iterations, delta);
}

PolicyStructure policy_structure_report(const SmdpModel& model, const PolicyTable& policy, Setup setup) {
    if (policy.first_count != model.first_count() || policy.second_count != model.second_count())
        throw ContractViolation("smdp: policy does not match the model's state space");
    PolicyStructure r;
    r.setup = setup;
    const ServerModel& first = model.first();
    const ServerModel& second = model.second();

    for (int s1 = 0; s1 < model.first_count(); ++s1) {
        for (int s2 = 0; s2 < model.second_count(); ++s2) {
            const HybridState s{s1, s2};
            const Action a = policy.at(s1, s2, Stream::Common);
            if (a == Action::Reject) {
                r.common_rejects.push_back(s);
                continue;
            }
            const int m1 = first.mobiles(s1);
            const int m2 = second.mobiles(s2);
            if (m1 == m2 || !model.admits(s, a))
                continue;
            ++r.off_diagonal_accepting;
            const bool to_fewer = (a == Action::RouteFirst) == (m1 < m2);
            (to_fewer ? r.balancing : r.greedy).push_back(s);
        }
    }

    auto prefix_threshold = [](const std::vector<bool>& accepts) {
        int n = 0;
        while (n < static_cast<int>(accepts.size()) && accepts[static_cast<std::size_t>(n)])
            ++n;
        for (std::size_t i = static_cast<std::size_t>(n); i < accepts.size(); ++i)
            if (accepts[i])
                return -1;
        return n;
    };
    for (int s2 = 0; s2 < model.second_count(); ++s2) {
        std::vector<bool> accepts;
        for (int s1 = 0; s1 < model.first_count(); ++s1)
            accepts.push_back(policy.at(s1, s2, Stream::First) == Action::RouteFirst);
        r.first_dedicated.push_back({s2, prefix_threshold(accepts)});
    }
    for (int s1 = 0; s1 < model.first_count(); ++s1) {
        std::vector<bool> accepts;
        for (int s2 = 0; s2 < model.second_count(); ++s2)
            accepts.push_back(policy.at(s1, s2, Stream::Second) == Action::RouteSecond);
        r.second_dedicated.push_back({s1, prefix_threshold(accepts)});
    }

    if (setup != Setup::ApNodeb && model.first_count() == model.second_count()) {
        r.common_mirror_symmetric = true;
        for (int s1 = 0; s1 < model.first_count() && r.common_mirror_symmetric; ++s1) {
            for (int s2 = 0; s2 < model.second_count(); ++s2) {
                if (s1 == s2)
                    continue;
                const Action a = policy.at(s1, s2, Stream::Common);
                const Action b = policy.at(s2, s1, Stream::Common);
                const Action mirrored = a == Action::RouteFirst    ? Action::RouteSecond
                                        : a == Action::RouteSecond ? Action::RouteFirst
                                                                   : Action::Reject;
                if (b != mirrored) {
                    r.common_mirror_symmetric = false;
                    break;
                }
            }
        }
    }
    return r;
}

std::string PolicyStructure::to_text(const SmdpModel& model) const {
    std::ostringstream out;
    auto label = [&](HybridState s) {
        return "(" + std::to_string(model.first().mobiles(s.first)) + "," +
               std::to_string(model.second().mobiles(s.second)) + ")";
    };
    out << "setup: " << smdp::to_string(setup) << '\n';
    out << "common stream: off-diagonal accepting states: " << off_diagonal_accepting << '\n';
    out << "  balancing (to fewer mobiles): " << balancing.size() << '\n';
    out << "  greedy (to more mobiles): " << greedy.size();
    for (const auto& s : greedy)
        out << ' ' << label(s);
    out << '\n';
    out << "  rejected states:";
    for (const auto& s : common_rejects)
        out << ' ' << label(s);
    out << '\n';
    if (setup != Setup::ApNodeb)
        out << "  mirror symmetric: " << (common_mirror_symmetric ? "yes" : "no") << '\n';
    out << "first dedicated stream: accepted mobile counts per second-server state (threshold, -1 = not a prefix):";
    for (const auto& t : first_dedicated)
        out << ' ' << model.second().mobiles(t.fixed_state) << ':' << t.threshold;
    out << '\n';
    out << "second dedicated stream: accepted states per first-server state:";
    for (const auto& t : second_dedicated)
        out << ' ' << model.first().mobiles(t.fixed_state) << ':' << t.threshold;
    out << '\n';
    return out.str();
}

} // namespace hybridcell::smdp

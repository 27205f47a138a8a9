#include "hybridcell/sim.hpp"

#include "hybridcell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace hybridcell::sim {

void SimConfig::validate() const {
    if (replications < 1)
        throw ConfigError("sim: replications must be >= 1");
    if (horizon_stages < 0)
        throw ConfigError("sim: horizon_stages must be >= 0 (0 = automatic)");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw ConfigError("sim: confidence must lie in (0, 1)");
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

ReplicationRng::ReplicationRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t replication)
    : engine_(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ replication)) {}

double ReplicationRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ReplicationRng::exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate summarize(std::span<const double> samples) {
    Estimate e;
    e.replications = static_cast<int>(samples.size());
    if (samples.empty())
        return e;
    const double n = static_cast<double>(samples.size());
    e.mean = pairwise_sum(samples) / n;
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        std::transform(samples.begin(), samples.end(), sq.begin(),
                       [&](double x) { return (x - e.mean) * (x - e.mean); });
        e.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    }
    return e;
}

int auto_horizon(double gamma) {
    if (gamma <= 0.0)
        return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(1e-12) / std::log(gamma))));
}

namespace {

// Runs body(i) for i in [0, count) across hardware threads. Each index owns
// its output slot, so results are independent of scheduling.
template <class Body>
void parallel_for(int count, Body body) {
    const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 16);
    if (workers == 1 || count < 1024) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::jthread> pool;
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([=] {
            for (int i = begin; i < end; ++i)
                body(i);
        });
    }
}

} // namespace

std::vector<DiscountedEstimate> simulate_discounted_reward(const smdp::PolicyTable& policy,
                                                           const smdp::SmdpModel& model,
                                                           const SimConfig& config,
                                                           const std::vector<smdp::HybridState>& starts) {
    using smdp::Stream;
    config.validate();
    if (policy.first_count != model.first_count() || policy.second_count != model.second_count() ||
        policy.actions.size() != static_cast<std::size_t>(model.state_count()))
        throw ContractViolation("sim: policy does not cover the state space");

    const int states = model.state_count();
    const double rate = model.uniformization_rate();
    const double gamma = model.config().gamma;
    const smdp::StreamConfig& streams = model.streams();

    // Per-state event thresholds and policy consequences.
    struct Row {
        double cut[5];
        double reward[3];
        int next[3];
        int depart_first;
        int depart_second;
    };
    std::vector<Row> table(static_cast<std::size_t>(states));
    for (int i = 0; i < states; ++i) {
        const smdp::HybridState s = model.state(i);
        Row& r = table[static_cast<std::size_t>(i)];
        double acc = 0.0;
        acc += streams.lambda_first;
        r.cut[0] = acc;
        acc += streams.lambda_second;
        r.cut[1] = acc;
        acc += streams.lambda_common;
        r.cut[2] = acc;
        acc += model.first().service_rate(s.first);
        r.cut[3] = acc;
        acc += model.second().service_rate(s.second);
        r.cut[4] = acc;
        for (Stream k : smdp::kStreams) {
            const auto a = policy.at(s.first, s.second, k);
            const auto ki = static_cast<std::size_t>(k);
            r.reward[ki] = smdp::stage_reward(model, s, k, a);
            r.next[ki] = model.index(model.successor(s, a));
        }
        r.depart_first = model.index({model.first().depart(s.first), s.second});
        r.depart_second = model.index({s.first, model.second().depart(s.second)});
    }

    const int horizon = config.horizon_stages > 0 ? config.horizon_stages : auto_horizon(gamma);
    const double bound = gamma > 0.0 ? std::pow(gamma, horizon) * model.max_stage_reward() / (1.0 - gamma) : 0.0;

    std::vector<DiscountedEstimate> out;
    std::vector<double> samples(static_cast<std::size_t>(config.replications));
    for (const smdp::HybridState& start : starts) {
        if (start.first < 0 || start.first >= model.first_count() || start.second < 0 ||
            start.second >= model.second_count())
            throw ContractViolation("sim: start state outside the state space");
        const int start_index = model.index(start);
        parallel_for(config.replications, [&](int rep) {
            ReplicationRng rng(config.seed, static_cast<std::uint64_t>(start_index),
                               static_cast<std::uint64_t>(rep));
            int s = start_index;
            double discount = 1.0;
            double total = 0.0;
            for (int t = 0; t < horizon; ++t) {
                const Row& r = table[static_cast<std::size_t>(s)];
                const double u = rng.uniform() * rate;
                if (u < r.cut[2]) {
                    const std::size_t k = u < r.cut[0] ? 0 : (u < r.cut[1] ? 1 : 2);
                    total += discount * r.reward[k];
                    s = r.next[k];
                } else if (u < r.cut[3]) {
                    s = r.depart_first;
                } else if (u < r.cut[4]) {
                    s = r.depart_second;
                }
                discount *= gamma;
            }
            samples[static_cast<std::size_t>(rep)] = total;
        });
        out.push_back({start, summarize(samples), horizon, bound});
    }
    return out;
}

Estimate simulate_tagged_service_time(game::ThresholdPolicy policy, int present, const game::GameConfig& config,
                                      const SimConfig& sim_config) {
    config.validate();
    sim_config.validate();
    const int top = config.capacity;
    if (present < 0 || present > top - 1)
        throw ContractViolation("sim: tagged mobile needs 0 <= m_c <= M_AP - 1");
    if (policy.level < 0 || policy.level > top || !(policy.q >= 0.0 && policy.q <= 1.0))
        throw ContractViolation("sim: threshold policy outside 0 <= L <= M_AP, 0 <= q <= 1");
    const game::ThresholdPolicy p = policy.canonical(top);

    std::vector<double> samples(static_cast<std::size_t>(sim_config.replications));
    parallel_for(sim_config.replications, [&](int rep) {
        ReplicationRng rng(sim_config.seed, static_cast<std::uint64_t>(present),
                           static_cast<std::uint64_t>(rep));
        int m = present;
        double elapsed = 0.0;
        for (;;) {
            const bool full = m == top - 1;
            const double dedicated = full ? 0.0 : config.lambda_ap;
            const double common = full ? 0.0 : config.lambda_ap3g;
            const double mu = config.mu_ap[static_cast<std::size_t>(m)];
            const double total = dedicated + common + mu;
            elapsed += rng.exponential(total);
            const double u = rng.uniform() * total;
            if (u < dedicated) {
                ++m;
            } else if (u < dedicated + common) {
                const double join = p.join_probability(m + 1);
                if (join >= 1.0 || (join > 0.0 && rng.uniform() < join))
                    ++m;
            } else {
                if (rng.uniform() * (m + 1) < 1.0)
                    break;
                --m;
            }
        }
        samples[static_cast<std::size_t>(rep)] = elapsed;
    });
    return summarize(samples);
}

} // namespace hybridcell::sim

#pragma once

#include "hybridcell/game.hpp"
#include "hybridcell/smdp.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace hybridcell::sim {

struct SimConfig {
    std::uint64_t seed = 20070611;
    int replications = 100000;
    /// Stages simulated per discounted-reward replication; 0 picks the
    /// smallest horizon with gamma^H <= 1e-12.
    int horizon_stages = 0;
    double confidence = 0.99;

    void validate() const;
    bool operator==(const SimConfig&) const = default;
};

/// Independent generator for one replication of one stream. The engine seed
/// is a SplitMix64 hash of (seed, stream, replication), so results do not
/// depend on how replications are scheduled.
class ReplicationRng {
public:
    ReplicationRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t replication);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Exponential with the given rate (> 0).
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    int replications = 0;
};

/// Mean and standard error of i.i.d. samples; pairwise summation.
Estimate summarize(std::span<const double> samples);

double pairwise_sum(std::span<const double> values);

int auto_horizon(double gamma);

struct DiscountedEstimate {
    smdp::HybridState state;
    Estimate estimate;
    int horizon = 0;
    double truncation_bound = 0.0; ///< gamma^H * R_max / (1 - gamma)
};

/**
 * Discounted reward of the uniformized chain under a fixed policy. Each
 * stage draws an arrival of stream k with probability lambda_k / Lambda, a
 * departure from server i with probability mu_i(s) / Lambda, and otherwise a
 * self-loop; rewards are collected on arrivals and discounted by gamma per stage.
 */
std::vector<DiscountedEstimate> simulate_discounted_reward(const smdp::PolicyTable& policy,
                                                           const smdp::SmdpModel& model,
                                                           const SimConfig& config,
                                                           const std::vector<smdp::HybridState>& starts);

/**
 * Sojourn of a tagged mobile that joins the AP with m_c others present while
 * everyone else follows the threshold policy. Arrivals are blocked when the
 * AP is full; a service event removes the tagged mobile with probability
 * 1 / (m + 1) and otherwise one of the m others.
 */
Estimate simulate_tagged_service_time(game::ThresholdPolicy policy, int present, const game::GameConfig& config,
                                      const SimConfig& sim_config);

} // namespace hybridcell::sim

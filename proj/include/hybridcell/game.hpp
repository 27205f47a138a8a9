#pragma once

#include "hybridcell/umts_model.hpp"
#include "hybridcell/wlan_model.hpp"

#include <string>
#include <vector>

namespace hybridcell::game {

/**
 * [L, q] threshold rule for joining the AP: join when fewer than L mobiles
 * are connected, join with probability q at exactly L, never above L.
 */
struct ThresholdPolicy {
    int level = 0;   ///< L
    double q = 0.0;

    [[nodiscard]] double g() const noexcept { return level + q; }

    /// Canonical form for an AP of the given capacity: [L, 1] becomes
    /// [L + 1, 0] and any level at or above capacity becomes [capacity, 0].
    [[nodiscard]] ThresholdPolicy canonical(int capacity) const;

    /// Joining probability for an arrival that finds `present` mobiles.
    [[nodiscard]] double join_probability(int present) const noexcept;

    bool operator==(const ThresholdPolicy&) const = default;
};

struct GameConfig {
    double lambda_ap = 0.03;
    double lambda_ap3g = 0.01;
    int capacity = 18;               ///< M_AP
    /// Service rate with m_c other mobiles present, m_c = 0..M_AP-1.
    std::vector<double> mu_ap;
    double tau = 0.0;                ///< worst-case NodeB service time, s

    void validate() const;
};

/**
 * Game inputs from the WLAN model: mu_ap[m] = zeta * theta_AP(m) for m >= 1,
 * and the single-mobile rate zeta * theta_AP(1) for m = 0, where the tagged
 * mobile is alone in the cell.
 */
GameConfig make_game_config(const wlan::WlanCell& cell, double lambda_ap, double lambda_ap3g, double tau);

/// 1 / (zeta * min theta_3G) over the table rows with N <= M_3G.
double tau_worst_case(const umts::UmtsTable& table, const umts::UmtsParams& params);

/// One row of the service-time system in its printed form:
/// V(m) = constant + down V(m-1) + self V(m) + up V(m+1).
struct ServiceEquation {
    double constant = 0.0;
    double down = 0.0;
    double self = 0.0;
    double up = 0.0;
};

/// Rows for V(0..M_AP-1) under the profile where everyone follows `policy`
/// (taken in canonical form). ContractViolation outside 0 <= L <= M_AP, 0 <= q <= 1.
std::vector<ServiceEquation> assemble_service_equations(ThresholdPolicy policy, const GameConfig& config);

/// Largest |V(m) - rhs_m(V)| / (1 + |V(m)|) over the printed equations.
double printed_residual(const std::vector<ServiceEquation>& rows, const std::vector<double>& v);

/// Expected AP service time V(m_c) of a tagged mobile joining with m_c
/// others present, m_c = 0..M_AP-1, seconds. Dense solve with partial
/// pivoting; NumericalError when the residual check fails.
std::vector<double> expected_service_time(ThresholdPolicy policy, const GameConfig& config);

enum class EquilibriumBranch {
    FullCapacity,  ///< V(M_AP - 1, [M_AP]) < tau
    Pure,          ///< [L_min, 0]
    Mixed,         ///< [L_min, q*] with q* from bisection
};

struct Equilibrium {
    ThresholdPolicy policy;
    EquilibriumBranch branch = EquilibriumBranch::Pure;
    int l_min = -1;
    int bisection_iterations = 0;
};

/// Threshold equilibrium by the join-or-balk procedure. The q* root is
/// bracketed after checking V(L_min, [L_min, q]) is monotone on a 0.01 grid.
Equilibrium find_equilibrium(const GameConfig& config);

/// V(L, [L, 1]) for L = 0..M_AP-1.
std::vector<double> threshold_service_times(const GameConfig& config);

struct SweepPoint {
    double lambda_ap3g = 0.0;
    ThresholdPolicy policy;
};

/// Equilibrium per common-stream arrival rate. The grid must be non-empty
/// and strictly increasing (ContractViolation otherwise).
std::vector<SweepPoint> staircase_sweep(const GameConfig& config, const std::vector<double>& lambda_common_grid);

std::string to_string(EquilibriumBranch branch);

} // namespace hybridcell::game

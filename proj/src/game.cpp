#include "hybridcell/game.hpp"

#include "hybridcell/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hybridcell::game {

ThresholdPolicy ThresholdPolicy::canonical(int capacity) const {
    ThresholdPolicy p = *this;
    if (p.q >= 1.0) {
        ++p.level;
        p.q = 0.0;
    }
    if (p.level >= capacity) {
        p.level = capacity;
        p.q = 0.0;
    }
    return p;
}

double ThresholdPolicy::join_probability(int present) const noexcept {
    if (present < level)
        return 1.0;
    if (present == level)
        return q;
    return 0.0;
}

void GameConfig::validate() const {
    if (capacity < 1)
        throw ConfigError("game: capacity M_AP must be >= 1");
    if (!(lambda_ap >= 0.0) || !(lambda_ap3g >= 0.0))
        throw ConfigError("game: arrival rates must be >= 0");
    if (mu_ap.size() != static_cast<std::size_t>(capacity))
        throw ConfigError("game: need one service rate per m_c = 0..M_AP-1");
    for (double mu : mu_ap)
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw ConfigError("game: service rates must be positive and finite");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ConfigError("game: tau must be positive and finite");
}

GameConfig make_game_config(const wlan::WlanCell& cell, double lambda_ap, double lambda_ap3g, double tau) {
    GameConfig config;
    config.lambda_ap = lambda_ap;
    config.lambda_ap3g = lambda_ap3g;
    config.capacity = cell.params().capacity;
    config.tau = tau;
    for (int m = 0; m < config.capacity; ++m)
        config.mu_ap.push_back(cell.service_rate(std::max(m, 1)));
    return config;
}

double tau_worst_case(const umts::UmtsTable& table, const umts::UmtsParams& params) {
    params.validate();
    double slowest = 0.0;
    for (const auto& row : table.rows())
        if (row.mobiles <= params.capacity && (slowest == 0.0 || row.theta_bps < slowest))
            slowest = row.theta_bps;
    if (slowest == 0.0)
        throw ConfigError("game: no table rows with N <= M_3G");
    return 1.0 / (params.zeta * slowest);
}

std::vector<ServiceEquation> assemble_service_equations(ThresholdPolicy policy, const GameConfig& config) {
    config.validate();
    const int top = config.capacity;
    if (policy.level < 0 || policy.level > top || !(policy.q >= 0.0 && policy.q <= 1.0))
        throw ContractViolation("game: threshold policy [" + std::to_string(policy.level) + ", " +
                                std::to_string(policy.q) + "] outside 0 <= L <= M_AP, 0 <= q <= 1");
    const ThresholdPolicy p = policy.canonical(top);
    const double a = config.lambda_ap;
    const double c = config.lambda_ap3g;

    std::vector<ServiceEquation> rows(static_cast<std::size_t>(top));
    for (int m = 0; m < top; ++m) {
        ServiceEquation& row = rows[static_cast<std::size_t>(m)];
        const double mu = config.mu_ap[static_cast<std::size_t>(m)];
        const double stay_share = static_cast<double>(m) / (m + 1); // another mobile leaves
        if (m == top - 1) {
            // AP full with the tagged mobile: only service events.
            row.constant = 1.0 / mu;
            row.down = stay_share;
        } else if (m + 1 <= p.level) {
            // Common arrivals see m + 1 mobiles and join with u(m + 1); the
            // rest loop back to the same state.
            const double u = p.join_probability(m + 1);
            const double alpha = a + c + mu;
            row.constant = 1.0 / alpha;
            row.down = mu / alpha * stay_share;
            row.up = (a + u * c) / alpha;
            row.self = c * (1.0 - u) / alpha;
        } else {
            const double rate = a + mu;
            row.constant = 1.0 / rate;
            row.down = mu / rate * stay_share;
            row.up = a / rate;
        }
    }
    return rows;
}

double printed_residual(const std::vector<ServiceEquation>& rows, const std::vector<double>& v) {
    if (rows.size() != v.size())
        throw ContractViolation("game: residual needs one value per equation");
    double worst = 0.0;
    const std::size_t n = v.size();
    for (std::size_t m = 0; m < n; ++m) {
        const ServiceEquation& r = rows[m];
        double rhs = r.constant + r.self * v[m];
        if (m > 0)
            rhs += r.down * v[m - 1];
        if (m + 1 < n)
            rhs += r.up * v[m + 1];
        worst = std::max(worst, std::abs(v[m] - rhs) / (1.0 + std::abs(v[m])));
    }
    return worst;
}

std::vector<double> expected_service_time(ThresholdPolicy policy, const GameConfig& config) {
    const auto rows = assemble_service_equations(policy, config);
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        const ServiceEquation& r = rows[static_cast<std::size_t>(m)];
        a(m, m) = 1.0 - r.self;
        if (m > 0)
            a(m, m - 1) = -r.down;
        if (m + 1 < n)
            a(m, m + 1) = -r.up;
        b(m) = r.constant;
    }
    const Eigen::VectorXd x = a.partialPivLu().solve(b);
    if (!x.allFinite())
        throw NumericalError("game: service-time system is singular");
    const double residual = (a * x - b).norm();
    if (residual > 1e-9 * (1.0 + x.norm()))
        throw NumericalError("game: service-time solve residual " + std::to_string(residual) + " too large");
    return {x.data(), x.data() + n};
}

std::vector<double> threshold_service_times(const GameConfig& config) {
    std::vector<double> out;
    for (int level = 0; level < config.capacity; ++level)
        out.push_back(expected_service_time({level, 1.0}, config)[static_cast<std::size_t>(level)]);
    return out;
}

Equilibrium find_equilibrium(const GameConfig& config) {
    config.validate();
    const int top = config.capacity;
    const double tau = config.tau;
    Equilibrium eq;

    const double full = expected_service_time({top, 0.0}, config)[static_cast<std::size_t>(top - 1)];
    if (full < tau) {
        eq.policy = {top, 0.0};
        eq.branch = EquilibriumBranch::FullCapacity;
        return eq;
    }

    int l_min = -1;
    for (int level = 0; level < top; ++level) {
        if (expected_service_time({level, 1.0}, config)[static_cast<std::size_t>(level)] > tau) {
            l_min = level;
            break;
        }
    }
    if (l_min < 0)
        throw ContractViolation("game: no threshold L in 0..M_AP-1 with V(L, [L,1]) > tau");
    eq.l_min = l_min;

    auto value_at = [&](double q) {
        return expected_service_time({l_min, q}, config)[static_cast<std::size_t>(l_min)];
    };
    if (value_at(0.0) >= tau) {
        eq.policy = {l_min, 0.0};
        eq.branch = EquilibriumBranch::Pure;
        return eq;
    }

    double previous = value_at(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double v = value_at(i / 100.0);
        if (v < previous)
            throw NumericalError("game: V(L_min, [L_min, q]) is not monotone in q");
        previous = v;
    }

    double lo = 0.0;
    double hi = 1.0;
    for (int it = 1; it <= 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gap = value_at(mid) - tau;
        if (std::abs(gap) <= 1e-9 * tau) {
            eq.policy = {l_min, mid};
            eq.branch = EquilibriumBranch::Mixed;
            eq.bisection_iterations = it;
            return eq;
        }
        (gap < 0.0 ? lo : hi) = mid;
    }
    throw NumericalError("game: q* bisection did not reach |V - tau| <= 1e-9 tau");
}

std::vector<SweepPoint> staircase_sweep(const GameConfig& config, const std::vector<double>& grid) {
    if (grid.empty())
        throw ContractViolation("game: sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ContractViolation("game: sweep grid must be strictly increasing");
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double lambda : grid) {
        GameConfig point = config;
        point.lambda_ap3g = lambda;
        out.push_back({lambda, find_equilibrium(point).policy});
    }
    return out;
}

std::string to_string(EquilibriumBranch branch) {
    switch (branch) {
    case EquilibriumBranch::FullCapacity: return "full-capacity";
    case EquilibriumBranch::Pure: return "pure";
    case EquilibriumBranch::Mixed: return "mixed";
    }
    return "?";
}

} // namespace hybridcell::game

#pragma once

#include <memory>

namespace hybridcell::wlan {

/// 802.11b constants for an RTS/CTS cell with a saturated AP. Sizes are in
/// bits, rates in bits/s, times in seconds.
struct WlanParams {
    double l_tcp = 8000.0;
    double l_mac = 272.0;
    double l_iph = 320.0;
    double l_ack = 112.0;
    double l_rts = 180.0;
    double l_cts = 112.0;
    double r_data = 11e6;
    double r_control = 2e6;
    double t_p = 144e-6;
    double t_phy = 48e-6;
    double t_difs = 50e-6;
    double t_sifs = 10e-6;
    double t_slot = 20e-6;
    double cw_min = 32.0;
    int retry_limit = 7;          ///< K
    double b0 = 16.0;             ///< initial mean back-off, slots
    double backoff_multiplier = 2.0;
    double w_star = 1.0;          ///< receiver advertised window; only 1 is modelled
    double zeta = 1e-6;           ///< inverse mean file size, 1/bits
    int capacity = 18;            ///< pole capacity M_AP

    /// Throws ConfigError when any invariant is broken.
    void validate() const;

    bool operator==(const WlanParams&) const = default;
};

struct OverheadResult {
    double t_tbo = 0.0;        ///< mean total back-off per successful packet
    double t_w = 0.0;          ///< mean total collision time per successful packet
    double t_tcp_data = 0.0;
    double t_tcp_ack = 0.0;
    double collision_probability = 0.0;
};

/// Source of the back-off and collision overheads for a given (real-valued)
/// number of backlogged contenders.
class OverheadModel {
public:
    virtual ~OverheadModel() = default;
    [[nodiscard]] virtual OverheadResult evaluate(double backlogged, const WlanParams& params) const = 0;
};

/**
 * Saturation back-off model with RTS/CTS access.
 *
 * The conditional collision probability p_c solves
 *   p_c = 1 - (1 - tau(p_c))^(m_b - 1),
 *   tau(p) = 2 (1 - 2p) / ((1 - 2p)(b0 + 1) + p b0 (1 - (2p)^K)),
 * found by bisection on [0, 1). Back-off accumulates b0 p^i / 2 slots at
 * every retry stage reached (i = 0..K); collisions cost one RTS plus DIFS
 * each, with the expected collision count truncated at K.
 */
class SaturationBackoffModel final : public OverheadModel {
public:
    [[nodiscard]] OverheadResult evaluate(double backlogged, const WlanParams& params) const override;

    static constexpr double kTolerance = 1e-10;
    static constexpr int kMaxIterations = 200;
};

/// Contention attempt probability for a given collision probability.
/// Evaluated through the geometric-sum form, so p = 1/2 is regular.
double attempt_probability(double collision_probability, const WlanParams& params);

/// Solves the collision fixed point for m_b contenders. Throws NumericalError
/// when bisection does not reach the tolerance within the iteration cap.
double collision_probability(double backlogged, const WlanParams& params);

/// m_b = 1 + m_c / 2: the AP plus half of the mobiles (each holds a TCP ack
/// half of the time).
double backlogged_count(int mobiles);

OverheadResult overhead(double backlogged, const WlanParams& params);

/// Per-mobile downlink TCP throughput, bits/s. m_c = 0 is a DomainError.
double theta_ap(int mobiles, const WlanParams& params);

/// m_c * theta_ap(m_c), and 0 for an empty cell.
double aggregate_throughput_ap(int mobiles, const WlanParams& params);

/// zeta * theta_ap(m_c), and 0 for an empty cell.
double mu_ap(int mobiles, const WlanParams& params);

/// Throughput evaluator bound to one parameter set and overhead model.
class WlanCell {
public:
    explicit WlanCell(WlanParams params,
                      std::shared_ptr<const OverheadModel> model = std::make_shared<SaturationBackoffModel>());

    [[nodiscard]] const WlanParams& params() const noexcept { return params_; }

    [[nodiscard]] OverheadResult overhead_at(int mobiles) const;
    [[nodiscard]] double theta_per_mobile(int mobiles) const;
    [[nodiscard]] double aggregate_throughput(int mobiles) const;
    [[nodiscard]] double service_rate(int mobiles) const;

private:
    void check_range(int mobiles, int lowest) const;

    WlanParams params_;
    std::shared_ptr<const OverheadModel> model_;
};

} // namespace hybridcell::wlan

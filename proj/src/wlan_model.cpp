#include "hybridcell/wlan_model.hpp"

#include "hybridcell/errors.hpp"

#include <cmath>
#include <string>

namespace hybridcell::wlan {

void WlanParams::validate() const {
    const double positive[] = {l_tcp, l_mac, l_iph, l_ack, l_rts, l_cts, r_data, r_control,
                               t_p, t_phy, t_difs, t_sifs, t_slot, cw_min, b0, zeta};
    for (double v : positive) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("wlan: sizes, rates, times, b0 and zeta must be positive and finite");
    }
    if (retry_limit < 1)
        throw ConfigError("wlan: retry limit K must be >= 1");
    if (!(backoff_multiplier >= 1.0))
        throw ConfigError("wlan: back-off multiplier must be >= 1");
    if (w_star != 1.0)
        throw ConfigError("wlan: only an advertised window W* = 1 is supported");
    if (capacity < 1)
        throw ConfigError("wlan: capacity M_AP must be >= 1");
}

double attempt_probability(double pc, const WlanParams& params) {
    // (1 - (2p)^K) / (1 - 2p) = sum_{j<K} (2p)^j
    double series = 0.0;
    double term = 1.0;
    for (int j = 0; j < params.retry_limit; ++j) {
        series += term;
        term *= 2.0 * pc;
    }
    return 2.0 / ((params.b0 + 1.0) + pc * params.b0 * series);
}

double collision_probability(double backlogged, const WlanParams& params) {
    if (!(backlogged >= 1.0))
        throw DomainError("wlan: backlogged contender count must be >= 1, got " + std::to_string(backlogged));
    if (backlogged == 1.0)
        return 0.0;

    // g is strictly decreasing: the attempt probability falls as p_c grows.
    const double others = backlogged - 1.0;
    auto g = [&](double pc) {
        return 1.0 - std::pow(1.0 - attempt_probability(pc, params), others) - pc;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < SaturationBackoffModel::kMaxIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < SaturationBackoffModel::kTolerance)
            return 0.5 * (lo + hi);
    }
    throw NumericalError("wlan: collision fixed point did not converge");
}

OverheadResult SaturationBackoffModel::evaluate(double backlogged, const WlanParams& p) const {
    const double preamble = p.t_p + p.t_phy;
    const double t_rts = preamble + p.l_rts / p.r_control;
    const double t_cts = preamble + p.l_cts / p.r_control;
    const double t_mac_ack = preamble + p.l_ack / p.r_control;
    const double handshake = t_rts + p.t_sifs + t_cts + p.t_sifs + preamble;
    const double closing = p.t_sifs + t_mac_ack + p.t_difs;

    OverheadResult r;
    r.t_tcp_data = handshake + (p.l_mac + p.l_iph + p.l_tcp) / p.r_data + closing;
    r.t_tcp_ack = handshake + (p.l_mac + p.l_iph) / p.r_data + closing;

    const double pc = collision_probability(backlogged, p);
    r.collision_probability = pc;

    double backoff_slots = 0.0;
    double collisions = 0.0;
    double reach = 1.0;   // pc^i
    double window = p.b0; // b0 * multiplier^i
    for (int i = 0; i <= p.retry_limit; ++i) {
        backoff_slots += reach * window / 2.0;
        if (i > 0)
            collisions += reach;
        reach *= pc;
        window *= p.backoff_multiplier;
    }
    r.t_tbo = p.t_slot * backoff_slots;
    r.t_w = collisions * (t_rts + p.t_difs);
    return r;
}

double backlogged_count(int mobiles) {
    return 1.0 + static_cast<double>(mobiles) / 2.0;
}

OverheadResult overhead(double backlogged, const WlanParams& params) {
    return SaturationBackoffModel{}.evaluate(backlogged, params);
}

WlanCell::WlanCell(WlanParams params, std::shared_ptr<const OverheadModel> model)
    : params_(params), model_(std::move(model)) {
    params_.validate();
    if (!model_)
        throw ConfigError("wlan: overhead model must not be null");
}

void WlanCell::check_range(int mobiles, int lowest) const {
    if (mobiles < lowest || mobiles > params_.capacity)
        throw DomainError("wlan: mobile count " + std::to_string(mobiles) + " outside [" +
                          std::to_string(lowest) + ", " + std::to_string(params_.capacity) + "]");
}

OverheadResult WlanCell::overhead_at(int mobiles) const {
    check_range(mobiles, 0);
    return model_->evaluate(backlogged_count(mobiles), params_);
}

double WlanCell::theta_per_mobile(int mobiles) const {
    if (mobiles == 0)
        throw DomainError("wlan: per-mobile throughput is undefined for an empty cell");
    check_range(mobiles, 1);
    const OverheadResult o = model_->evaluate(backlogged_count(mobiles), params_);
    return params_.l_tcp /
           (mobiles * (o.t_tcp_data + o.t_tcp_ack + 2.0 * o.t_tbo + 2.0 * o.t_w));
}

double WlanCell::aggregate_throughput(int mobiles) const {
    check_range(mobiles, 0);
    return mobiles == 0 ? 0.0 : mobiles * theta_per_mobile(mobiles);
}

double WlanCell::service_rate(int mobiles) const {
    check_range(mobiles, 0);
    return mobiles == 0 ? 0.0 : params_.zeta * theta_per_mobile(mobiles);
}

double theta_ap(int mobiles, const WlanParams& params) {
    return WlanCell(params).theta_per_mobile(mobiles);
}

double aggregate_throughput_ap(int mobiles, const WlanParams& params) {
    return WlanCell(params).aggregate_throughput(mobiles);
}

double mu_ap(int mobiles, const WlanParams& params) {
    return WlanCell(params).service_rate(mobiles);
}

} // namespace hybridcell::wlan

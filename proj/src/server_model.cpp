#include "hybridcell/server_model.hpp"

#include "hybridcell/errors.hpp"

#include <algorithm>

namespace hybridcell {

double ServerModel::max_service_rate() const {
    double best = 0.0;
    for (int s = 0; s < state_count(); ++s)
        best = std::max(best, service_rate(s));
    return best;
}

int ServerModel::state_of_mobiles(int count) const {
    for (int s = 0; s < state_count(); ++s)
        if (mobiles(s) == count)
            return s;
    return -1;
}

void ServerModel::check_state(int state) const {
    if (state < 0 || state >= state_count())
        throw ContractViolation(kind() + ": state index " + std::to_string(state) + " out of range");
}

ApServer::ApServer(const wlan::WlanCell& cell) {
    const int capacity = cell.params().capacity;
    for (int m = 0; m <= capacity; ++m) {
        aggregate_.push_back(cell.aggregate_throughput(m));
        rate_.push_back(cell.service_rate(m));
    }
}

double ApServer::aggregate_throughput(int state) const {
    check_state(state);
    return aggregate_[static_cast<std::size_t>(state)];
}

double ApServer::service_rate(int state) const {
    check_state(state);
    return rate_[static_cast<std::size_t>(state)];
}

int ApServer::mobiles(int state) const {
    check_state(state);
    return state;
}

NodeBServer::NodeBServer(const umts::UmtsTable& table, const umts::UmtsParams& params)
    : zeta_(params.zeta) {
    params.validate();
    for (const auto& row : table.rows())
        if (row.mobiles <= params.capacity)
            rows_.push_back(row);
    if (rows_.empty())
        throw ConfigError("nodeb: no table rows with N <= capacity " + std::to_string(params.capacity));
}

double NodeBServer::aggregate_throughput(int state) const {
    check_state(state);
    const auto& r = rows_[static_cast<std::size_t>(state)];
    return r.mobiles * r.theta_bps;
}

double NodeBServer::service_rate(int state) const {
    check_state(state);
    return zeta_ * rows_[static_cast<std::size_t>(state)].theta_bps;
}

int NodeBServer::mobiles(int state) const {
    check_state(state);
    return rows_[static_cast<std::size_t>(state)].mobiles;
}

double NodeBServer::eta(int state) const {
    check_state(state);
    return rows_[static_cast<std::size_t>(state)].eta;
}

} // namespace hybridcell

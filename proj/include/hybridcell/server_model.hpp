#pragma once

#include "hybridcell/umts_model.hpp"
#include "hybridcell/wlan_model.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hybridcell {

/**
 * A finite-state server for the association problem. States are indexed
 * 0..S-1 from the emptiest to the fullest representable occupancy; admit
 * saturates at the top and depart clamps at the bottom.
 */
class ServerModel {
public:
    virtual ~ServerModel() = default;

    [[nodiscard]] virtual int state_count() const = 0;
    /// Sum of per-mobile throughputs, bits/s.
    [[nodiscard]] virtual double aggregate_throughput(int state) const = 0;
    /// Departure rate used by the decision process, 1/s.
    [[nodiscard]] virtual double service_rate(int state) const = 0;
    /// Number of connected mobiles; also the label written to CSV files.
    [[nodiscard]] virtual int mobiles(int state) const = 0;
    [[nodiscard]] virtual std::string kind() const = 0;

    [[nodiscard]] int admit(int state) const { return state + 1 < state_count() ? state + 1 : state; }
    [[nodiscard]] int depart(int state) const { return state > 0 ? state - 1 : state; }
    [[nodiscard]] bool is_full(int state) const { return state == state_count() - 1; }

    [[nodiscard]] double max_service_rate() const;

    /// Index of the state with the given mobile count, or -1.
    [[nodiscard]] int state_of_mobiles(int mobiles) const;

protected:
    void check_state(int state) const;
};

/// WLAN access point: states m_c = 0..M_AP.
class ApServer final : public ServerModel {
public:
    explicit ApServer(const wlan::WlanCell& cell);

    [[nodiscard]] int state_count() const override { return static_cast<int>(aggregate_.size()); }
    [[nodiscard]] double aggregate_throughput(int state) const override;
    [[nodiscard]] double service_rate(int state) const override;
    [[nodiscard]] int mobiles(int state) const override;
    [[nodiscard]] std::string kind() const override { return "ap"; }

private:
    std::vector<double> aggregate_;
    std::vector<double> rate_;
};

/// UMTS NodeB: states are the table rows with N = 1..M_3G. There is no empty
/// state; a departure from N = 1 leaves the load per user at its maximum.
class NodeBServer final : public ServerModel {
public:
    NodeBServer(const umts::UmtsTable& table, const umts::UmtsParams& params);

    [[nodiscard]] int state_count() const override { return static_cast<int>(rows_.size()); }
    [[nodiscard]] double aggregate_throughput(int state) const override;
    [[nodiscard]] double service_rate(int state) const override;
    [[nodiscard]] int mobiles(int state) const override;
    [[nodiscard]] std::string kind() const override { return "nodeb"; }

    [[nodiscard]] double eta(int state) const;

private:
    std::vector<umts::UmtsRow> rows_;
    double zeta_;
};

} // namespace hybridcell

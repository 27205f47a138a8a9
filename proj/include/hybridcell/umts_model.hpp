#pragma once

#include <string>
#include <vector>

namespace hybridcell::umts {

struct UmtsParams {
    double chip_rate = 3.84e6;  ///< W, chips/s
    double alpha_bar = 0.9;     ///< average orthogonality factor
    double i_bar = 0.7;         ///< average inter-to-intra-cell interference ratio
    double eta_max = 0.9;       ///< maximum downlink cell load
    double theta_min = 46e3;    ///< minimum per-mobile throughput, bits/s
    double zeta = 1e-6;         ///< inverse mean file size, 1/bits
    int capacity = 18;          ///< pole capacity M_3G

    void validate() const;

    /// 1 - alpha_bar + i_bar
    [[nodiscard]] double interference_factor() const noexcept { return 1.0 - alpha_bar + i_bar; }

    bool operator==(const UmtsParams&) const = default;
};

struct UmtsRow {
    double eta = 0.0;       ///< load per user
    double log_eta = 0.0;
    int mobiles = 0;        ///< N(eta)
    double sinr_db = 0.0;
    double theta_bps = 0.0; ///< per-mobile downlink throughput
    double ebno_db = 0.0;

    bool operator==(const UmtsRow&) const = default;
};

enum class EtaMove { Connect, Depart };

/**
 * Per-mobile NodeB throughput as a function of the load per user, indexed by
 * the number of connected mobiles. Rows are ordered by strictly increasing N
 * with strictly decreasing eta and throughput.
 */
class UmtsTable {
public:
    explicit UmtsTable(std::vector<UmtsRow> rows);

    /// The built-in 18-row table (N = 1..18, 572 down to 47 kbps).
    static const UmtsTable& builtin();

    /// Reads `eta,log_eta,N,sinr_db,theta_kbps,ebno_db`. Throws IoError or ConfigError.
    static UmtsTable from_csv(const std::string& path);
    static UmtsTable parse_csv(const std::string& text, const std::string& origin);

    [[nodiscard]] const std::vector<UmtsRow>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] const UmtsRow& row(std::size_t index) const { return rows_.at(index); }

    /// Index of the row whose eta is nearest (ties toward smaller N). DomainError
    /// outside [smallest eta, largest eta].
    [[nodiscard]] std::size_t row_of_eta(double eta) const;

    [[nodiscard]] int n_of_eta(double eta) const { return rows_[row_of_eta(eta)].mobiles; }
    [[nodiscard]] double theta_3g(double eta) const { return rows_[row_of_eta(eta)].theta_bps; }
    [[nodiscard]] double mu_3g(double eta, const UmtsParams& params) const {
        return params.zeta * theta_3g(eta);
    }

    /// eta of the neighbouring row, clamped to the table ends.
    [[nodiscard]] double delta_eta(double eta, EtaMove move) const;

    bool operator==(const UmtsTable&) const = default;

private:
    std::vector<UmtsRow> rows_;
};

/// eta W / (Eb/N0 (1 - alpha + i)), bits/s.
double theta_3g_closed_form(double eta, double ebno_linear, const UmtsParams& params);

/// 10 log10((W / theta) * SINR), dB.
double ebno_from(double theta_bps, double sinr_db, const UmtsParams& params);

/// floor(eta_max W / (theta_min Eb/N0 (1 - alpha + i))).
int pole_capacity(const UmtsParams& params, double ebno_linear);

/// Per-row deviation |EbNo_table - EbNo(theta, SINR)| in dB.
std::vector<double> ebno_deviations(const UmtsTable& table, const UmtsParams& params);

double db_to_linear(double db);

} // namespace hybridcell::umts

#include "hybridcell/umts_model.hpp"

#include "hybridcell/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hybridcell::umts {

void UmtsParams::validate() const {
    if (!(chip_rate > 0.0))
        throw ConfigError("umts: chip rate must be positive");
    if (!(eta_max > 0.0 && eta_max <= 1.0))
        throw ConfigError("umts: eta_max must lie in (0, 1]");
    if (!(interference_factor() > 0.0))
        throw ConfigError("umts: 1 - alpha_bar + i_bar must be positive");
    if (!(theta_min > 0.0))
        throw ConfigError("umts: theta_min must be positive");
    if (!(zeta > 0.0))
        throw ConfigError("umts: zeta must be positive");
    if (capacity < 1)
        throw ConfigError("umts: capacity M_3G must be >= 1");
}

UmtsTable::UmtsTable(std::vector<UmtsRow> rows) : rows_(std::move(rows)) {
    if (rows_.empty())
        throw ConfigError("umts table: no rows");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const UmtsRow& r = rows_[i];
        if (r.mobiles < 1 || !(r.eta > 0.0) || !(r.theta_bps > 0.0))
            throw ConfigError("umts table: row " + std::to_string(i + 1) + " has non-positive N, eta or throughput");
        if (i > 0) {
            const UmtsRow& prev = rows_[i - 1];
            if (r.mobiles <= prev.mobiles)
                throw ConfigError("umts table: N must be strictly increasing");
            if (r.eta >= prev.eta)
                throw ConfigError("umts table: eta must be strictly decreasing");
            if (r.theta_bps >= prev.theta_bps)
                throw ConfigError("umts table: throughput must be strictly decreasing");
        }
    }
}

const UmtsTable& UmtsTable::builtin() {
    static const UmtsTable table({
        {0.9, -0.10536, 1, 0.8423, 572e3, 9.0612},
        {0.45, -0.79851, 2, -2.1804, 465e3, 6.9503},
        {0.3, -1.204, 3, -3.7341, 405e3, 5.7894},
        {0.225, -1.4917, 4, -5.1034, 360e3, 5.0515},
        {0.18, -1.7148, 5, -6.0327, 322e3, 4.5669},
        {0.15, -1.8971, 6, -6.5093, 285e3, 4.3052},
        {0.1286, -2.0513, 7, -7.2075, 242e3, 4.3460},
        {0.1125, -2.1848, 8, -8.8312, 191e3, 4.7939},
        {0.1, -2.3026, 9, -8.9641, 144e3, 5.5091},
        {0.09, -2.4079, 10, -9.1832, 115e3, 6.0281},
        {0.0818, -2.5033, 11, -9.9324, 96e3, 6.3985},
        {0.0750, -2.5903, 12, -10.1847, 83e3, 6.6525},
        {0.0692, -2.6703, 13, -10.7294, 73e3, 6.8625},
        {0.0643, -2.7444, 14, -10.9023, 65e3, 7.0447},
        {0.06, -2.8134, 15, -10.9983, 60e3, 7.0927},
        {0.0563, -2.8779, 16, -11.1832, 55e3, 7.1903},
        {0.0529, -2.9386, 17, -11.3802, 51e3, 7.2549},
        {0.05, -2.9957, 18, -11.9231, 47e3, 7.3614},
    });
    return table;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw ConfigError(where + ": not a number: '" + s + "'");
    return v;
}

} // namespace

UmtsTable UmtsTable::parse_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError(origin + ": empty table file");
    const std::vector<std::string> expected{"eta", "log_eta", "N", "sinr_db", "theta_kbps", "ebno_db"};
    if (split_fields(line) != expected)
        throw ConfigError(origin + ": header must be eta,log_eta,N,sinr_db,theta_kbps,ebno_db");

    std::vector<UmtsRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto f = split_fields(line);
        const std::string where = origin + ":" + std::to_string(lineno);
        if (f.size() != 6)
            throw ConfigError(where + ": expected 6 fields");
        UmtsRow r;
        r.eta = parse_double(f[0], where);
        r.log_eta = parse_double(f[1], where);
        const double n = parse_double(f[2], where);
        if (n != std::floor(n))
            throw ConfigError(where + ": N must be an integer");
        r.mobiles = static_cast<int>(n);
        r.sinr_db = parse_double(f[3], where);
        r.theta_bps = parse_double(f[4], where) * 1e3;
        r.ebno_db = parse_double(f[5], where);
        rows.push_back(r);
    }
    return UmtsTable(std::move(rows));
}

UmtsTable UmtsTable::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path, "cannot open table file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

std::size_t UmtsTable::row_of_eta(double eta) const {
    const double hi = rows_.front().eta;
    const double lo = rows_.back().eta;
    if (!(eta >= lo && eta <= hi))
        throw DomainError("umts: load per user " + std::to_string(eta) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    std::size_t best = 0;
    double best_gap = std::abs(rows_[0].eta - eta);
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        const double gap = std::abs(rows_[i].eta - eta);
        if (gap < best_gap) { // strict: ties keep the smaller N
            best = i;
            best_gap = gap;
        }
    }
    return best;
}

double UmtsTable::delta_eta(double eta, EtaMove move) const {
    const std::size_t i = row_of_eta(eta);
    if (move == EtaMove::Connect)
        return rows_[i + 1 < rows_.size() ? i + 1 : i].eta;
    return rows_[i > 0 ? i - 1 : 0].eta;
}

double theta_3g_closed_form(double eta, double ebno_linear, const UmtsParams& params) {
    return eta * params.chip_rate / (ebno_linear * params.interference_factor());
}

double ebno_from(double theta_bps, double sinr_db, const UmtsParams& params) {
    if (!(theta_bps > 0.0))
        throw DomainError("umts: throughput must be positive");
    return 10.0 * std::log10(params.chip_rate / theta_bps * db_to_linear(sinr_db));
}

int pole_capacity(const UmtsParams& params, double ebno_linear) {
    return static_cast<int>(std::floor(params.eta_max * params.chip_rate /
                                       (params.theta_min * ebno_linear * params.interference_factor())));
}

std::vector<double> ebno_deviations(const UmtsTable& table, const UmtsParams& params) {
    std::vector<double> out;
    out.reserve(table.size());
    for (const UmtsRow& r : table.rows())
        out.push_back(std::abs(r.ebno_db - ebno_from(r.theta_bps, r.sinr_db, params)));
    return out;
}

double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

} // namespace hybridcell::umts

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybridcell/errors.hpp"
#include "hybridcell/umts_model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace hybridcell;
using namespace hybridcell::umts;

namespace {

constexpr int kThetaKbps[18] = {572, 465, 405, 360, 322, 285, 242, 191, 144, 115, 96, 83, 73, 65, 60, 55, 51, 47};

std::string table_csv(const UmtsTable& t) {
    std::string s = "eta,log_eta,N,sinr_db,theta_kbps,ebno_db\n";
    for (const auto& r : t.rows())
        s += std::to_string(r.eta) + "," + std::to_string(r.log_eta) + "," + std::to_string(r.mobiles) + "," +
             std::to_string(r.sinr_db) + "," + std::to_string(r.theta_bps / 1e3) + "," + std::to_string(r.ebno_db) +
             "\n";
    return s;
}

} // namespace

TEST_CASE("built-in table rows") {
    const auto& t = UmtsTable::builtin();
    REQUIRE(t.size() == 18);
    const UmtsParams p;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& r = t.row(i);
        CHECK(r.mobiles == static_cast<int>(i) + 1);
        CHECK(r.theta_bps == kThetaKbps[i] * 1e3);
        CHECK(std::abs(r.eta * r.mobiles - p.eta_max) <= 1e-3);
        CHECK(t.n_of_eta(r.eta) == r.mobiles);
        CHECK(t.theta_3g(r.eta) == r.theta_bps);
    }
}

TEST_CASE("lookup examples and domain") {
    const auto& t = UmtsTable::builtin();
    CHECK(t.n_of_eta(0.9) == 1);
    CHECK(t.n_of_eta(0.45) == 2);
    CHECK(t.n_of_eta(0.1) == 9);
    CHECK(t.theta_3g(0.15) == 285e3);
    CHECK(t.theta_3g(0.05) == 47e3);
    CHECK(t.n_of_eta(0.44) == 2); // nearest row
    CHECK_THROWS_AS((void)t.n_of_eta(0.95), DomainError);
    CHECK_THROWS_AS((void)t.n_of_eta(0.04), DomainError);
    const UmtsParams p;
    CHECK(t.mu_3g(0.9, p) == doctest::Approx(0.572));
    CHECK(t.mu_3g(0.05, p) == doctest::Approx(0.047));
}

TEST_CASE("nearest-row ties go to the smaller N") {
    const UmtsTable t({{0.75, 0, 1, 0, 3e5, 0}, {0.5, 0, 2, 0, 2e5, 0}, {0.25, 0, 3, 0, 1e5, 0}});
    CHECK(t.n_of_eta(0.625) == 1);
    CHECK(t.n_of_eta(0.375) == 2);
}

TEST_CASE("delta eta moves one row and clamps at the ends") {
    const auto& t = UmtsTable::builtin();
    CHECK(t.delta_eta(0.9, EtaMove::Connect) == 0.45);
    CHECK(t.delta_eta(0.9, EtaMove::Depart) == 0.9);
    CHECK(t.delta_eta(0.45, EtaMove::Connect) == 0.3);
    CHECK(t.delta_eta(0.05, EtaMove::Connect) == 0.05);
    CHECK(t.delta_eta(0.05, EtaMove::Depart) == 0.0529);
}

TEST_CASE("closed-form throughput") {
    const UmtsParams p;
    CHECK(p.interference_factor() == doctest::Approx(0.8));
    const double first = theta_3g_closed_form(0.9, db_to_linear(9.0612), p);
    CHECK(first == doctest::Approx(536e3).epsilon(2e-3));
    CHECK(theta_3g_closed_form(1.8, db_to_linear(9.0612), p) == doctest::Approx(2.0 * first));
    const double last = theta_3g_closed_form(0.05, db_to_linear(7.3614), p);
    CHECK(std::abs(last - 47e3) / 47e3 <= 0.2);
}

TEST_CASE("Eb/N0 consistency of every row") {
    const UmtsParams p;
    CHECK(ebno_from(572e3, 0.8423, p) == doctest::Approx(9.11).epsilon(1e-3));
    CHECK(ebno_from(47e3, -11.9231, p) == doctest::Approx(7.20).epsilon(1e-3));
    CHECK(ebno_from(p.chip_rate, 0.0, p) == doctest::Approx(0.0));
    for (double dev : ebno_deviations(UmtsTable::builtin(), p))
        CHECK(dev <= 0.75);
    CHECK_THROWS_AS((void)ebno_from(0.0, 1.0, p), DomainError);
}

TEST_CASE("pole capacity") {
    UmtsParams p;
    CHECK(pole_capacity(p, db_to_linear(7.3614)) == 17);
    CHECK(pole_capacity(p, 1.0) == 93);
    const double raw = p.eta_max * p.chip_rate / (p.theta_min * p.interference_factor());
    p.theta_min *= 2.0;
    CHECK(pole_capacity(p, 1.0) == static_cast<int>(std::floor(raw / 2.0)));
}

TEST_CASE("aggregate NodeB throughput peaks at N = 6") {
    const auto& t = UmtsTable::builtin();
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double prev = t.row(i - 1).mobiles * t.row(i - 1).theta_bps;
        const double now = t.row(i).mobiles * t.row(i).theta_bps;
        if (t.row(i).mobiles <= 6)
            CHECK(now > prev);
        else
            CHECK(now < prev);
    }
    CHECK(t.row(5).mobiles * t.row(5).theta_bps == 1710e3);
    CHECK(t.row(17).mobiles * t.row(17).theta_bps == 846e3);
}

TEST_CASE("CSV override round trip and rejection") {
    const auto& t = UmtsTable::builtin();
    const auto parsed = UmtsTable::parse_csv(table_csv(t), "mem");
    REQUIRE(parsed.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(parsed.row(i).mobiles == t.row(i).mobiles);
        CHECK(parsed.row(i).theta_bps == doctest::Approx(t.row(i).theta_bps));
    }
    CHECK_THROWS_AS(UmtsTable::parse_csv("eta,N\n0.9,1\n", "mem"), ConfigError);
    CHECK_THROWS_AS(UmtsTable::parse_csv("eta,log_eta,N,sinr_db,theta_kbps,ebno_db\n0.9,0,1,0,100,0\n0.45,0,2,0,200,0\n",
                                         "mem"),
                    ConfigError);
    CHECK_THROWS_AS(UmtsTable::from_csv("/nonexistent/table.csv"), IoError);

    const auto path = std::filesystem::temp_directory_path() / "hybridcell_table_test.csv";
    std::ofstream(path) << table_csv(t);
    CHECK(UmtsTable::from_csv(path.string()).size() == 18);
    std::filesystem::remove(path);
}

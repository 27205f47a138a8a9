#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybridcell/commands.hpp"
#include "hybridcell/errors.hpp"
#include "hybridcell/sim.hpp"

#include <cmath>
#include <numeric>

using namespace hybridcell;
using namespace hybridcell::sim;

namespace {

game::GameConfig two_state(double lambda) {
    game::GameConfig c;
    c.lambda_ap = lambda;
    c.lambda_ap3g = lambda;
    c.capacity = 2;
    c.mu_ap = {1.0, 1.0};
    c.tau = 1.0;
    return c;
}

SimConfig reps(int n, std::uint64_t seed = 99) {
    SimConfig s;
    s.replications = n;
    s.seed = seed;
    return s;
}

} // namespace

TEST_CASE("replication streams are reproducible and distinct") {
    ReplicationRng a(1, 2, 3);
    ReplicationRng b(1, 2, 3);
    ReplicationRng c(1, 2, 4);
    ReplicationRng d(1, 3, 3);
    bool differs_rep = false;
    bool differs_stream = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        differs_rep |= x != c.uniform();
        differs_stream |= x != d.uniform();
    }
    CHECK(differs_rep);
    CHECK(differs_stream);
}

TEST_CASE("exponential draws have the right mean") {
    std::vector<double> x(200000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        ReplicationRng rng(5, 0, i);
        x[i] = rng.exponential(4.0);
    }
    const auto e = summarize(x);
    CHECK(std::abs(e.mean - 0.25) < 4.0 * e.std_error);
}

TEST_CASE("summaries") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    const auto e = summarize(x);
    CHECK(e.mean == 2.5);
    CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(e.replications == 4);

    std::vector<double> many(1 << 20, 0.1);
    CHECK(std::abs(pairwise_sum(many) - 0.1 * many.size()) < 1e-8);
    CHECK(summarize(std::vector<double>{}).replications == 0);
}

TEST_CASE("automatic horizon") {
    CHECK(auto_horizon(0.0) == 1);
    const int h = auto_horizon(0.8);
    CHECK(std::pow(0.8, h) <= 1e-12);
    CHECK(std::pow(0.8, h - 1) > 1e-12);
}

TEST_CASE("discounted reward with gamma = 0 is the expected one-stage reward") {
    RunConfig c;
    c.smdp.gamma = 0.0;
    const auto model = build_smdp_model(c);
    const auto sol = smdp::value_iterate(model);
    const auto starts = sample_states(model, 5);
    const auto est = simulate_discounted_reward(sol.policy, model, reps(50000), starts);
    REQUIRE(est.size() == starts.size());
    for (const auto& e : est) {
        CHECK(e.horizon == 1);
        CHECK(e.truncation_bound == 0.0);
        CHECK(std::abs(e.estimate.mean - sol.value.at(e.state.first, e.state.second)) < 4.0 * e.estimate.std_error);
    }
}

TEST_CASE("no arrivals earn nothing") {
    RunConfig c;
    c.streams.lambda_first = c.streams.lambda_second = c.streams.lambda_common = 0.0;
    const auto model = build_smdp_model(c);
    const auto sol = smdp::value_iterate(model);
    for (const auto& e : simulate_discounted_reward(sol.policy, model, reps(200), sample_states(model, 5))) {
        CHECK(e.estimate.mean == 0.0);
        CHECK(e.estimate.std_error == 0.0);
    }
}

TEST_CASE("discounted reward simulation is reproducible") {
    const auto model = build_smdp_model(RunConfig{});
    const auto sol = smdp::value_iterate(model);
    const auto starts = sample_states(model, 3);
    const auto a = simulate_discounted_reward(sol.policy, model, reps(3000, 7), starts);
    const auto b = simulate_discounted_reward(sol.policy, model, reps(3000, 7), starts);
    const auto c = simulate_discounted_reward(sol.policy, model, reps(3000, 8), starts);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].estimate.mean == b[i].estimate.mean);
        CHECK(a[i].estimate.std_error == b[i].estimate.std_error);
        CHECK(a[i].estimate.mean != c[i].estimate.mean);
    }
    CHECK_THROWS_AS(simulate_discounted_reward(sol.policy, model, reps(10), {{99, 0}}), ContractViolation);
}

TEST_CASE("tagged mobile on the two-state system") {
    const auto c = two_state(1.0);
    const auto e0 = simulate_tagged_service_time({1, 0.0}, 0, c, reps(100000));
    const auto e1 = simulate_tagged_service_time({1, 0.0}, 1, c, reps(100000));
    CHECK(std::abs(e0.mean - 4.0 / 3.0) < 3.0 * e0.std_error);
    CHECK(std::abs(e1.mean - 5.0 / 3.0) < 3.0 * e1.std_error);

    // No arrivals: V(0) = 1 and V(1) = 1 + V(0) / 2.
    const auto quiet = simulate_tagged_service_time({1, 0.0}, 1, two_state(0.0), reps(100000));
    CHECK(std::abs(quiet.mean - 1.5) < 3.0 * quiet.std_error);
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
    const auto c = two_state(1.0);
    const auto small = simulate_tagged_service_time({1, 0.0}, 0, c, reps(4000));
    const auto large = simulate_tagged_service_time({1, 0.0}, 0, c, reps(16000));
    CHECK(small.std_error / large.std_error == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("tagged simulation preconditions") {
    const auto c = two_state(1.0);
    CHECK_THROWS_AS(simulate_tagged_service_time({1, 0.0}, 2, c, reps(10)), ContractViolation);
    CHECK_THROWS_AS(simulate_tagged_service_time({3, 0.0}, 0, c, reps(10)), ContractViolation);
    CHECK_THROWS_AS(simulate_tagged_service_time({1, 0.0}, 0, c, reps(0)), ConfigError);
}

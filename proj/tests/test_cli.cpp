#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct ScratchDir {
    fs::path path = fs::temp_directory_path() / ("hybridcell_cli_" + std::to_string(::getpid()));
    ScratchDir() {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

const fs::path& scratch() {
    static const ScratchDir dir;
    return dir.path;
}

int run(const std::string& args) {
    const std::string cmd = std::string(HYBRIDCELL_CLI) + " " + args + " > " + (scratch() / "stdout.txt").string() +
                            " 2> " + (scratch() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::string config_arg(const std::string& name) {
    return std::string("--config ") + HYBRIDCELL_CONFIGS + "/" + name + ".conf";
}

// Runs the same command into two directories and compares every CSV.
void check_rerun(const std::string& args, std::initializer_list<const char*> files) {
    const fs::path a = scratch() / "rerun_a";
    const fs::path b = scratch() / "rerun_b";
    fs::remove_all(a);
    fs::remove_all(b);
    REQUIRE(run(args + " --out " + a.string()) == 0);
    REQUIRE(run(args + " --out " + b.string()) == 0);
    for (const char* f : files) {
        CAPTURE(f);
        const std::string first = slurp(a / f);
        CHECK_FALSE(first.empty());
        CHECK(first == slurp(b / f));
    }
    CHECK(slurp(a / "effective_config.txt") == slurp(b / "effective_config.txt"));
}

} // namespace

TEST_CASE("throughput curves") {
    const fs::path out = scratch() / "curves";
    REQUIRE(run("throughput-curves --out " + out.string()) == 0);
    const std::string ap = slurp(out / "ap_curve.csv");
    const std::string nodeb = slurp(out / "nodeb_curve.csv");
    CHECK(ap.rfind("m_c,theta_per_mobile_bps,aggregate_bps\n0,0,0\n", 0) == 0);
    CHECK(nodeb.rfind("N,eta,log_eta,theta_bps,aggregate_bps\n1,0.9,-0.10536,572000,572000\n", 0) == 0);
    CHECK(nodeb.find("\n6,0.15,-1.8971,285000,1710000\n") != std::string::npos);
    CHECK(std::count(ap.begin(), ap.end(), '\n') == 20);
    CHECK(std::count(nodeb.begin(), nodeb.end(), '\n') == 19);
}

TEST_CASE("solve-smdp writes value and policy grids") {
    const fs::path out = scratch() / "nn";
    REQUIRE(run("solve-smdp " + config_arg("nodeb-nodeb") + " --out " + out.string()) == 0);
    const std::string policy = slurp(out / "policy.csv");
    CHECK(policy.rfind("s1,s2,stream,action\n", 0) == 0);
    CHECK(policy.find("\n2,4,2,2\n") != std::string::npos);
    CHECK(policy.find("\n18,18,2,0\n") != std::string::npos);
    CHECK(slurp(out / "value.csv").rfind("s1,s2,value\n1,1,", 0) == 0);
}

TEST_CASE("equilibrium report prints the configured tau") {
    const fs::path out = scratch() / "eq";
    REQUIRE(run("equilibrium " + config_arg("game") + " --out " + out.string()) == 0);
    const std::string report = slurp(out / "equilibrium.txt");
    CHECK(report.find("tau = 2.5\n") != std::string::npos);
    CHECK(report.find("[L*, q*] = [") != std::string::npos);
    CHECK(slurp(scratch() / "stdout.txt") == report);
}

TEST_CASE("one-point staircase") {
    const fs::path out = scratch() / "stair1";
    REQUIRE(run("staircase " + config_arg("game") + " --grid 0.5:0.5:1 --out " + out.string()) == 0);
    const std::string csv = slurp(out / "staircase.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.rfind("lambda_ap3g,L,q,g\n0.5,", 0) == 0);
}

TEST_CASE("simulation with no arrivals reports zero rewards") {
    const auto cfg = write_config("quiet.conf", "streams.lambda_first = 0\nstreams.lambda_second = 0\n"
                                                "streams.lambda_common = 0\nsim.replications = 100\n");
    const fs::path out = scratch() / "quiet";
    REQUIRE(run("simulate --target smdp --config " + cfg.string() + " --out " + out.string()) == 0);
    std::istringstream lines(slurp(out / "simulation.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "state,solver_value,sim_mean,sim_stderr,z_score");
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find(",0,0,0,0") != std::string::npos);
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("reruns are byte-identical") {
    const auto fast = write_config("fast.conf", "sim.replications = 2000\n");
    const auto fast_game = write_config("fast_game.conf", slurp(fs::path(HYBRIDCELL_CONFIGS) / "game.conf") +
                                                              "sim.replications = 2000\n");
    check_rerun("throughput-curves", {"ap_curve.csv", "nodeb_curve.csv"});
    check_rerun("solve-smdp", {"value.csv", "policy.csv", "structure.txt"});
    check_rerun("equilibrium " + config_arg("game"), {"equilibrium.txt", "threshold_values.csv"});
    check_rerun("staircase " + config_arg("game"), {"staircase.csv"});
    check_rerun("simulate --target smdp --seed 5 --config " + fast.string(), {"simulation.csv"});
    check_rerun("simulate --target game --seed 5 --config " + fast_game.string(), {"simulation.csv"});
}

TEST_CASE("seed override changes simulation output") {
    const auto fast = write_config("fast2.conf", "sim.replications = 500\n");
    REQUIRE(run("simulate --seed 1 --config " + fast.string() + " --out " + (scratch() / "s1").string()) == 0);
    REQUIRE(run("simulate --seed 2 --config " + fast.string() + " --out " + (scratch() / "s2").string()) == 0);
    CHECK(slurp(scratch() / "s1" / "simulation.csv") != slurp(scratch() / "s2" / "simulation.csv"));
    CHECK(slurp(scratch() / "s2" / "effective_config.txt").find("sim.seed = 2\n") != std::string::npos);
}

TEST_CASE("errors map to exit codes") {
    const auto bad = write_config("bad.conf", "smdp.gamma = 2\n");
    CHECK(run("solve-smdp --config " + bad.string() + " --out " + (scratch() / "x").string()) == 2);
    CHECK(slurp(scratch() / "stderr.txt").find("[config]") != std::string::npos);
    CHECK(run("solve-smdp --config /nonexistent.conf") == 7);
    const auto capped = write_config("capped.conf", "smdp.max_iterations = 2\n");
    CHECK(run("solve-smdp --config " + capped.string() + " --out " + (scratch() / "x").string()) == 5);
    CHECK(run("staircase --grid 1:0:3 --out " + (scratch() / "x").string()) == 2);
    CHECK(run("no-such-command") != 0);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bicont/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kConfigs = BICONT_CONFIG_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "bicont_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Run run(std::vector<std::string> args, const fs::path& out_dir) {
    args.insert(args.begin(), "bicont");
    args.push_back("--out");
    args.push_back(out_dir.string());
    std::ostringstream out;
    std::ostringstream err;
    const int code = bicont::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json load(const fs::path& path) {
    return json::parse(slurp(path));
}

}  // namespace

TEST_CASE("check") {
    const auto dir = scratch("check");
    const auto shift = run({"check", "left_shift"}, dir);
    REQUIRE(shift.code == 0);
    const auto report = load(dir / "check_left_shift.json");
    REQUIRE(report["passed"] == true);
    REQUIRE(report["notes"][0].get<std::string>().rfind("generator:", 0) == 0);

    const auto lap = run({"check", "--operator", "laplacian"}, dir);
    REQUIRE(lap.code == 1);
    const auto lap_report = load(dir / "check_laplacian.json");
    bool witness = false;
    for (const auto& w : lap_report["witnesses"]) {
        witness = witness || (w["n"] == 2 && std::abs(w["lhs"].get<double>() - 2.0) <= 1e-6 &&
                              w["rhs"].get<double>() == 4.0);
    }
    REQUIRE(witness);

    REQUIRE(run({"check", "--operator", "bogus"}, dir).code == 2);
    REQUIRE(run({"check", "bogus"}, dir).code == 2);
    REQUIRE(run({"check"}, dir).code == 2);
    REQUIRE(run({"frobnicate"}, dir).code == 2);
}

TEST_CASE("check on a network config") {
    const auto dir = scratch("check_network");
    REQUIRE(run({"check", "--network", (kConfigs / "split.json").string()}, dir).code == 0);
    REQUIRE(load(dir / "check_network.json")["passed"] == true);
    const auto sink = run({"check", "--network", (kConfigs / "sink.json").string()}, dir);
    REQUIRE(sink.code == 2);
    REQUIRE(sink.err.find("column sum") != std::string::npos);
}

TEST_CASE("counterexample and heat reproductions") {
    const auto dir = scratch("reproductions");
    REQUIRE(run({"counterexample", "--n", "2", "--lambda", "1"}, dir).code == 0);
    auto doc = load(dir / "counterexample.json");
    REQUIRE(doc["p_n_of_f"] == 0.0);
    REQUIRE(std::abs(doc["lower_bound"].get<double>() - 0.0497871) <= 1e-7);
    REQUIRE(doc["passed"] == true);

    REQUIRE(run({"counterexample", "--n", "2", "--lambda", "2"}, dir).code == 0);
    doc = load(dir / "counterexample.json");
    REQUIRE(std::abs(doc["lower_bound"].get<double>() - 0.0012394) <= 1e-7);

    REQUIRE(run({"counterexample", "--n", "0"}, dir).code == 2);
    REQUIRE(run({"counterexample", "--lambda", "-1"}, dir).code == 2);

    REQUIRE(run({"heat"}, dir).code == 0);
    const auto heat = load(dir / "heat.json");
    REQUIRE(std::abs(heat["p_n_of_lambda_minus_a_f"].get<double>() - 2.0) <= 1e-6);
    REQUIRE(heat["p_n_of_f_over_lambda"] == 4.0);
}

TEST_CASE("euler and resolvent studies") {
    const auto dir = scratch("studies");
    REQUIRE(run({"euler", "--operator", "left_shift", "--t", "1"}, dir).code == 0);
    const auto csv = slurp(dir / "euler.csv");
    REQUIRE(csv.rfind("m,seminorm_index,error\n", 0) == 0);
    REQUIRE(load(dir / "euler.json")["monotone_within_5_percent"] == true);

    REQUIRE(run({"resolvent", "--operator", "left_shift"}, dir).code == 0);
    REQUIRE(load(dir / "resolvent.json")["max_abs_difference_on_window"].get<double>() <= 1e-3);
    REQUIRE(run({"resolvent", "--operator", "right_translation"}, dir).code == 0);
    REQUIRE(run({"resolvent", "--network", (kConfigs / "two_cycle.json").string(), "--lambda", "1"},
                dir)
                .code == 0);
    REQUIRE(load(dir / "network_resolvent.json")["boundary_residual"].get<double>() <= 1e-9);
}

TEST_CASE("simulate") {
    const auto dir = scratch("simulate");
    const auto cycle = (kConfigs / "two_cycle.json").string();
    REQUIRE(run({"simulate", "--network", cycle, "--t", "2"}, dir).code == 0);
    const auto csv = slurp(dir / "simulate.csv");
    REQUIRE(csv.rfind("t,edge,x,u\n", 0) == 0);
    auto summary = load(dir / "simulate_summary.json");
    for (const auto& m : summary["mass"]) {
        REQUIRE(std::abs(m.get<double>() - 0.5) <= 1e-12);
    }

    REQUIRE(run({"simulate", "--network", cycle, "--solver", "upwind", "--cfl", "0.9", "--t", "10"},
                dir)
                .code == 0);
    summary = load(dir / "simulate_summary.json");
    REQUIRE(summary["mass_drift_relative"].get<double>() <= 1e-3);

    const auto cfl = run({"simulate", "--network", cycle, "--solver", "upwind", "--cfl", "1.5"}, dir);
    REQUIRE(cfl.code == 2);
    REQUIRE(cfl.err.find("CFL") != std::string::npos);
    const auto sink = run({"simulate", "--network", (kConfigs / "sink.json").string()}, dir);
    REQUIRE(sink.code == 2);
    REQUIRE(sink.err.find("column sum 0 != 1") != std::string::npos);
    REQUIRE(run({"simulate", "--network", cycle, "--solver", "magic"}, dir).code == 2);
    REQUIRE(run({"simulate"}, dir).code == 2);
}

TEST_CASE("outputs are deterministic and carry full precision") {
    const auto a = scratch("determinism_a");
    const auto b = scratch("determinism_b");
    for (const auto& dir : {a, b}) {
        REQUIRE(run({"check", "left_shift", "--seed", "5"}, dir).code == 0);
        REQUIRE(run({"simulate", "--network", (kConfigs / "split.json").string(), "--t", "1.3"}, dir)
                    .code == 0);
    }
    for (const char* name : {"check_left_shift.json", "simulate.csv", "simulate_summary.json"}) {
        REQUIRE(slurp(a / name) == slurp(b / name));
    }

    std::istringstream rows(slurp(a / "simulate.csv"));
    std::string line;
    std::getline(rows, line);
    std::size_t checked = 0;
    while (std::getline(rows, line) && checked < 2000) {
        const auto cell = line.substr(line.rfind(',') + 1);
        const double v = std::strtod(cell.c_str(), nullptr);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        REQUIRE(cell == buf);
        ++checked;
    }
    REQUIRE(checked > 0);
}

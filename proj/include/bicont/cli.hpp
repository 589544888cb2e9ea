#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bicont::cli {

enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kInvalidInput = 2,
    kInternalError = 3,
};

/// Parsed command line. Zero-valued sizes mean "use the command's default".
struct RunConfig {
    std::string command;
    std::string op;
    std::string network_path;
    std::vector<double> lambdas;
    double t = 0.0;
    std::vector<std::size_t> m_ladder;
    std::size_t grid = 0;
    std::string solver = "characteristics";
    double cfl = 0.9;
    double horizon = 15.0;
    std::size_t steps = 3000;
    std::size_t n = 2;
    std::size_t windows = 0;
    std::size_t samples = 20;
    std::size_t frames = 10;
    std::string out = ".";
    std::uint64_t seed = 1;
};

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// files under --out; a one-line summary per result goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_check(const RunConfig& cfg, std::ostream& out);
int cmd_counterexample(const RunConfig& cfg, std::ostream& out);
int cmd_heat(const RunConfig& cfg, std::ostream& out);
int cmd_euler(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_resolvent(const RunConfig& cfg, std::ostream& out);

}  // namespace bicont::cli

#include "bicont/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "bicont/format.hpp"
#include "bicont/generation.hpp"
#include "bicont/network_config.hpp"
#include "bicont/report_json.hpp"
#include "bicont/semigroups.hpp"

namespace bicont::cli {

namespace {

using nlohmann::json;

/// Usage errors that are not caught by CLI11 itself (unknown labels, bad n).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out);
    return std::filesystem::path(cfg.out) / name;
}

void write_json(const RunConfig& cfg, const std::string& name, const json& doc) {
    std::ofstream file(output_path(cfg, name));
    file << doc.dump(2) << '\n';
}

std::vector<double> lambdas_or(const RunConfig& cfg, std::vector<double> fallback) {
    return cfg.lambdas.empty() ? fallback : cfg.lambdas;
}

std::size_t or_default(std::size_t value, std::size_t fallback) {
    return value == 0 ? fallback : value;
}

// Grid, seminorm family and exact semigroup belonging to an operator label.
struct OperatorSetup {
    Generator generator;
    CompactSeminormFamily family;
    std::vector<double> default_lambdas;
};

OperatorSetup operator_setup(const RunConfig& cfg, const std::string& label) {
    const std::size_t cells = or_default(cfg.grid, 4000);
    if (label == "left_shift") {
        return {left_shift_generator(Grid(0.0, 20.0, cells)),
                CompactSeminormFamily(WindowOrientation::right, or_default(cfg.windows, 10)),
                {0.1, 1.0, 10.0}};
    }
    if (label == "right_translation") {
        return {right_translation_generator(Grid(-10.0, 0.0, cells)),
                CompactSeminormFamily(WindowOrientation::left, or_default(cfg.windows, 10)),
                {0.1, 1.0, 10.0}};
    }
    if (label == "laplacian") {
        return {laplacian_generator(Grid(-2.0, 2.0, cells)),
                CompactSeminormFamily(WindowOrientation::symmetric, or_default(cfg.windows, 2)),
                {1.0}};
    }
    throw UsageError("unknown operator '" + label +
                     "' (expected left_shift, right_translation or laplacian)");
}

std::string verdict_line(const CheckReport& report) {
    return (report.passed ? "PASS " : "FAIL ") + report.check_name + ": " +
           (report.notes.empty() ? std::string() : report.notes.front());
}

void print_witnesses(const CheckReport& report, std::ostream& out) {
    for (const auto& w : report.witnesses) {
        out << "  witness " << w.input_id << " lambda=" << format_real(w.lambda);
        if (w.n) {
            out << " n=" << *w.n;
        }
        out << " lhs=" << format_real(w.lhs) << " rhs=" << format_real(w.rhs) << '\n';
    }
}

int check_network(const RunConfig& cfg, std::ostream& out) {
    const auto config = load_network_config(cfg.network_path);
    const auto lambdas = lambdas_or(cfg, {1.0, 5.0});
    const auto report = network_verdict(config.network, lambdas, cfg.seed, cfg.samples);
    write_json(cfg, "check_network.json", to_json(report));
    out << verdict_line(report) << '\n';
    print_witnesses(report, out);
    return report.passed ? kSuccess : kCheckFailed;
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.network_path.empty()) {
        return check_network(cfg, out);
    }
    if (cfg.op.empty()) {
        throw UsageError("check needs an operator label or --network");
    }
    const auto setup = operator_setup(cfg, cfg.op);
    const auto& grid = setup.generator.grid();
    const auto lambdas = lambdas_or(cfg, setup.default_lambdas);

    std::vector<Sample> samples;
    std::vector<Sample> probes = sample_library(grid, cfg.seed + 1, cfg.samples, false);
    if (cfg.op == "left_shift") {
        samples = sample_library(grid, cfg.seed, cfg.samples, true);
    } else if (cfg.op == "right_translation") {
        samples = sample_library(grid, cfg.seed, cfg.samples, false);
        // R(1) applied to the ramp vanishing on [-2, 0]: (1 - A) of it is the
        // ramp itself, so p_1 of the left side is 0.
        samples.push_back({"ramp_resolvent",
                           right_translation_resolvent(1.0, counterexample_ramp(grid, 2))});
    } else {
        samples.push_back({"x^2", GridFunction::sample(grid, [](double x) { return x * x; })});
        auto extra = sample_library(grid, cfg.seed, cfg.samples, false);
        samples.insert(samples.end(), extra.begin(), extra.end());
        probes.clear();
    }

    const auto report =
        lumer_phillips_verdict(setup.generator, setup.family, samples, lambdas, probes);
    write_json(cfg, "check_" + cfg.op + ".json", to_json(report));
    out << verdict_line(report) << '\n';
    print_witnesses(report, out);
    return report.passed ? kSuccess : kCheckFailed;
}

int cmd_counterexample(const RunConfig& cfg, std::ostream& out) {
    if (cfg.n < 1) {
        throw UsageError("counterexample needs n >= 1");
    }
    const double lambda = lambdas_or(cfg, {1.0}).front();
    if (!(lambda > 0.0)) {
        throw UsageError("counterexample needs lambda > 0");
    }
    const double x_min = std::max(10.0, static_cast<double>(cfg.n) + 2.0);
    const auto result =
        reproduce_translation_counterexample(cfg.n, lambda, x_min, or_default(cfg.grid, 4000));
    write_json(cfg, "counterexample.json",
               {{"n", cfg.n},
                {"lambda", lambda},
                {"x_min", x_min},
                {"p_n_of_f", result.p_n_of_f},
                {"p_1_of_Rf", result.p_1_of_rf},
                {"lower_bound", result.lower_bound},
                {"passed", result.passed}});
    out << (result.passed ? "PASS" : "FAIL") << " counterexample: p_n(f)="
        << format_real(result.p_n_of_f) << " p_1(R f)=" << format_real(result.p_1_of_rf)
        << " lower_bound=" << format_real(result.lower_bound) << '\n';
    return result.passed ? kSuccess : kCheckFailed;
}

int cmd_heat(const RunConfig& cfg, std::ostream& out) {
    if (cfg.n < 1) {
        throw UsageError("heat needs n >= 1");
    }
    const double lambda = lambdas_or(cfg, {1.0}).front();
    if (!(lambda > 0.0)) {
        throw UsageError("heat needs lambda > 0");
    }
    const auto result = reproduce_heat_counterexample(cfg.n, lambda, or_default(cfg.grid, 4000));
    const double rhs = lambda * lambda * result.p_n_of_f_over_lambda;
    const bool violated = result.p_n_of_lambda_minus_a_f < rhs;
    write_json(cfg, "heat.json",
               {{"n", cfg.n},
                {"lambda", lambda},
                {"p_n_of_lambda_minus_a_f", result.p_n_of_lambda_minus_a_f},
                {"p_n_of_f_over_lambda", result.p_n_of_f_over_lambda},
                {"lambda_times_p_n_of_f", rhs},
                {"bi_dissipativity_violated", violated}});
    out << (violated ? "PASS" : "FAIL") << " heat: p_n((lambda-A)f)="
        << format_real(result.p_n_of_lambda_minus_a_f)
        << " p_n(f)/lambda=" << format_real(result.p_n_of_f_over_lambda) << '\n';
    return violated ? kSuccess : kCheckFailed;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// sin^2 bump supported on [start, start + 1].
GridFunction unit_bump(const Grid& grid, double start) {
    return GridFunction::sample(grid, [start](double x) {
        if (x <= start || x >= start + 1.0) {
            return 0.0;
        }
        const double s = std::sin(kPi * (x - start));
        return s * s;
    });
}

}  // namespace

int cmd_euler(const RunConfig& cfg, std::ostream& out) {
    const std::string label = cfg.op.empty() ? "left_shift" : cfg.op;
    const auto setup = operator_setup(cfg, label);
    if (!setup.generator.has_resolvent()) {
        throw UsageError("euler needs an operator with a resolvent, got " + label);
    }
    const double t = cfg.t > 0.0 ? cfg.t : 1.0;
    std::vector<std::size_t> ladder = cfg.m_ladder;
    if (ladder.empty()) {
        ladder = {4, 16, 64, 256, 1024};
    }
    const bool right_half = label == "left_shift";
    const std::size_t windows = or_default(cfg.windows, 5);
    // Both semigroups are causal: values on the seminorm windows do not
    // depend on the truncation beyond them, so the grid stops at window N.
    const double reach = std::max(5.0, static_cast<double>(windows));
    const Grid grid = right_half ? Grid(0.0, reach, or_default(cfg.grid, 4000))
                                 : Grid(-reach, 0.0, or_default(cfg.grid, 4000));
    const auto generator = right_half ? left_shift_generator(grid) : right_translation_generator(grid);
    const auto f = unit_bump(grid, right_half ? 2.0 : -3.0);
    const auto exact = right_half ? shift_semigroup_apply(t, f) : right_translation_apply(t, f);
    const CompactSeminormFamily family(setup.family.orientation(), windows);

    std::ofstream csv(output_path(cfg, "euler.csv"));
    csv << "m,seminorm_index,error\n";
    std::vector<double> top_errors;
    for (std::size_t m : ladder) {
        if (m == 0) {
            throw UsageError("m-ladder entries must be >= 1");
        }
        const auto approx = euler_apply(generator, t, m, f);
        const auto diff = approx - exact;
        for (std::size_t n = 1; n <= windows; ++n) {
            const double err = eval_pn(family, n, diff);
            csv << m << ',' << n << ',' << format_real(err) << '\n';
            if (n == windows) {
                top_errors.push_back(err);
            }
        }
    }
    bool monotone = true;
    for (std::size_t k = 1; k < top_errors.size(); ++k) {
        monotone = monotone && top_errors[k] <= 1.05 * top_errors[k - 1];
    }
    write_json(cfg, "euler.json",
               {{"operator", label},
                {"t", t},
                {"m_ladder", ladder},
                {"seminorm_index", windows},
                {"errors", top_errors},
                {"norm_f", sup_norm(f)},
                {"monotone_within_5_percent", monotone}});
    out << (monotone ? "PASS" : "FAIL") << " euler: p_" << windows << " error at m="
        << ladder.back() << " is " << format_real(top_errors.back()) << '\n';
    return monotone ? kSuccess : kCheckFailed;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.network_path.empty()) {
        throw UsageError("simulate needs --network <path>");
    }
    if (cfg.solver != "characteristics" && cfg.solver != "upwind") {
        throw UsageError("unknown solver '" + cfg.solver + "' (expected characteristics or upwind)");
    }
    if (cfg.frames == 0) {
        throw UsageError("simulate needs at least one frame");
    }
    const auto config = load_network_config(cfg.network_path);
    const auto& net = config.network;
    const double t_max = cfg.t > 0.0 ? cfg.t : 2.0;
    const double h = net.grid().h();
    const double dt = cfg.cfl * h / net.c_max();
    if (cfg.solver == "upwind" && (!(cfg.cfl > 0.0) || cfg.cfl > 1.0)) {
        throw NetworkValidationError("CFL condition c_max dt / h <= 1", "--cfl",
                                     "cfl = " + format_real(cfg.cfl));
    }

    EdgeState state = config.initial ? *config.initial : zero_state(net);
    std::ofstream csv(output_path(cfg, "simulate.csv"));
    csv << "t,edge,x,u\n";
    std::vector<double> times;
    std::vector<double> masses;
    std::vector<double> norms;
    auto record = [&](const EdgeState& s, double t) {
        for (std::size_t j = 0; j < s.edges.size(); ++j) {
            const auto& f = s.edges[j];
            for (std::size_t i = 0; i < f.size(); ++i) {
                csv << format_real(t) << ',' << j << ',' << format_real(f.grid().node(i)) << ','
                    << format_real(f[i]) << '\n';
            }
        }
        times.push_back(t);
        masses.push_back(total_mass(s));
        norms.push_back(supnorm_l1(s));
    };

    record(state, 0.0);
    double now = 0.0;
    for (std::size_t k = 1; k <= cfg.frames; ++k) {
        const double target = t_max * static_cast<double>(k) / static_cast<double>(cfg.frames);
        if (cfg.solver == "characteristics") {
            state = step_characteristics(net, state, target - now);
        } else {
            while (now < target - 1e-14) {
                const double step = std::min(dt, target - now);
                state = step_upwind(net, state, step);
                now += step;
            }
        }
        now = target;
        record(state, target);
    }

    double drift = 0.0;
    const double scale = std::abs(masses.front()) > 0.0 ? std::abs(masses.front()) : 1.0;
    for (double m : masses) {
        drift = std::max(drift, std::abs(m - masses.front()) / scale);
    }
    write_json(cfg, "simulate_summary.json",
               {{"solver", cfg.solver},
                {"t_max", t_max},
                {"cfl", cfg.solver == "upwind" ? json(cfg.cfl) : json(nullptr)},
                {"times", times},
                {"mass", masses},
                {"supnorm_l1", norms},
                {"mass_drift_relative", drift}});
    out << "simulate " << cfg.solver << ": t_max=" << format_real(t_max)
        << " relative mass drift=" << format_real(drift) << '\n';
    return kSuccess;
}

int cmd_resolvent(const RunConfig& cfg, std::ostream& out) {
    const double lambda = lambdas_or(cfg, {1.0}).front();
    if (!(lambda > 0.0)) {
        throw UsageError("resolvent needs lambda > 0");
    }
    if (!cfg.network_path.empty()) {
        const auto config = load_network_config(cfg.network_path);
        const auto& net = config.network;
        EdgeState g = config.initial ? *config.initial : zero_state(net);
        if (!config.initial) {
            for (auto& f : g.edges) {
                f = GridFunction::sample(net.grid(), [](double) { return 1.0; });
            }
        }
        const auto result = network_resolvent(net, lambda, g);
        std::ofstream csv(output_path(cfg, "network_resolvent.csv"));
        csv << "edge,x,value\n";
        for (std::size_t j = 0; j < result.value.edges.size(); ++j) {
            const auto& f = result.value.edges[j];
            for (std::size_t i = 0; i < f.size(); ++i) {
                csv << j << ',' << format_real(f.grid().node(i)) << ',' << format_real(f[i]) << '\n';
            }
        }
        const bool ok = result.boundary_residual <= 1e-9;
        write_json(cfg, "network_resolvent.json",
                   {{"lambda", lambda},
                    {"condition_number", result.condition_number},
                    {"neumann_warning", result.neumann_warning},
                    {"boundary_residual", result.boundary_residual},
                    {"equation_residual", result.equation_residual},
                    {"lambda_times_supnorm_l1_of_f", lambda * supnorm_l1(result.value)},
                    {"supnorm_l1_of_g", supnorm_l1(g)}});
        out << (ok ? "PASS" : "FAIL") << " network resolvent: boundary residual "
            << format_real(result.boundary_residual) << '\n';
        return ok ? kSuccess : kCheckFailed;
    }

    const std::string label = cfg.op.empty() ? "left_shift" : cfg.op;
    if (label == "laplacian") {
        throw UsageError("resolvent unavailable for laplacian");
    }
    const auto setup = operator_setup(cfg, label);
    const auto& grid = setup.generator.grid();
    const bool right_half = label == "left_shift";
    const auto g = right_half ? GridFunction::sample(grid,
                                                     [](double x) {
                                                         return 1.0 - (1.0 + x) * std::exp(-x);
                                                     })
                              : GridFunction::sample(grid, [](double x) {
                                    return 1.0 / (1.0 + x * x);
                                });
    const auto exact = setup.generator.resolvent(lambda, g);
    const auto semigroup = right_half ? shift_semigroup() : right_translation_semigroup();
    const auto laplace = laplace_resolvent(semigroup, lambda, g, cfg.horizon, cfg.steps);
    const double max_diff = right_half ? window_sup(laplace.value - exact, 0.0, 5.0)
                                       : window_sup(laplace.value - exact, -5.0, 0.0);
    {
        std::ofstream csv(output_path(cfg, "resolvent_exact.csv"));
        write_csv(csv, exact);
    }
    {
        std::ofstream csv(output_path(cfg, "resolvent_laplace.csv"));
        write_csv(csv, laplace.value);
    }
    const bool ok = max_diff <= 1e-3;
    write_json(cfg, "resolvent.json",
               {{"operator", label},
                {"lambda", lambda},
                {"horizon", cfg.horizon},
                {"steps", cfg.steps},
                {"max_abs_difference_on_window", max_diff},
                {"tail_bound", laplace.tail_bound}});
    out << (ok ? "PASS" : "FAIL") << " resolvent: Laplace vs exact max difference "
        << format_real(max_diff) << " (tail bound " << format_real(laplace.tail_bound) << ")\n";
    return ok ? kSuccess : kCheckFailed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semigroup generation checks, resolvent approximation and network transport flows",
                 "bicont"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--lambda", cfg.lambdas, "Resolvent parameter (repeatable)");
        sub->add_option("--grid", cfg.grid, "Number of grid cells");
        sub->add_option("--out", cfg.out, "Output directory");
        sub->add_option("--seed", cfg.seed, "Seed of the sample library");
    };

    auto* check = app.add_subcommand("check", "Bi-dissipativity and surjectivity verdict");
    check->add_option("operator,--operator", cfg.op,
                      "left_shift, right_translation or laplacian");
    check->add_option("--network", cfg.network_path, "Network config (JSON)");
    check->add_option("--windows", cfg.windows, "Number of seminorms N");
    check->add_option("--samples", cfg.samples, "Number of seeded samples");
    add_common(check);

    auto* counter = app.add_subcommand("counterexample", "Right-translation counterexample");
    counter->add_option("--n", cfg.n, "Ramp index n >= 1");
    add_common(counter);

    auto* heat = app.add_subcommand("heat", "Laplacian non-bi-dissipativity example");
    heat->add_option("--n", cfg.n, "Seminorm index n >= 1");
    add_common(heat);

    auto* euler = app.add_subcommand("euler", "Euler formula convergence study");
    euler->add_option("--operator", cfg.op, "Operator label");
    euler->add_option("--t", cfg.t, "Time");
    euler->add_option("--m-ladder", cfg.m_ladder, "Comma-separated m values")->delimiter(',');
    euler->add_option("--windows", cfg.windows, "Largest seminorm index");
    add_common(euler);

    auto* simulate = app.add_subcommand("simulate", "Transport flow on a network");
    simulate->add_option("--network", cfg.network_path, "Network config (JSON)")->required();
    simulate->add_option("--solver", cfg.solver, "characteristics or upwind");
    simulate->add_option("--t", cfg.t, "Final time");
    simulate->add_option("--cfl", cfg.cfl, "CFL number for upwind");
    simulate->add_option("--frames", cfg.frames, "Number of output intervals");
    add_common(simulate);

    auto* resolvent = app.add_subcommand("resolvent", "Exact vs Laplace-transform resolvent");
    resolvent->add_option("--operator", cfg.op, "Operator label");
    resolvent->add_option("--network", cfg.network_path, "Network config (JSON)");
    resolvent->add_option("--horizon", cfg.horizon, "Laplace integral horizon H");
    resolvent->add_option("--steps", cfg.steps, "Time steps of the Laplace quadrature");
    add_common(resolvent);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInvalidInput;
    }

    try {
        if (*check) {
            return cmd_check(cfg, out);
        }
        if (*counter) {
            return cmd_counterexample(cfg, out);
        }
        if (*heat) {
            return cmd_heat(cfg, out);
        }
        if (*euler) {
            return cmd_euler(cfg, out);
        }
        if (*simulate) {
            return cmd_simulate(cfg, out);
        }
        if (*resolvent) {
            return cmd_resolvent(cfg, out);
        }
    } catch (const NetworkValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::out_of_range& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInvalidInput;
}

}  // namespace bicont::cli

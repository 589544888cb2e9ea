#include "bicont/generation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "bicont/format.hpp"

namespace bicont {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Scale of the stencil error in lambda f - c f' - q f - g for f the resolvent
// of g: f decays at rate mu = (lambda - q) / c, and
// c f''' = c mu^2 f' - mu g' - g'' with |f'| <= 2 mu ||g|| / lambda.
double resolvent_residual_scale(double mu, const GridFunction& g) {
    return std::max({1.0, mu * mu * sup_norm(g), mu * sup_norm(differentiate(g)),
                     sup_norm(second_derivative(g))});
}

void require_in_domain(const Generator& generator, std::span<const Sample> samples) {
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (!generator.in_domain(samples[k].f)) {
            throw std::invalid_argument("sample " + std::to_string(k) + " (" + samples[k].id +
                                        ") is outside the domain of " + generator.label());
        }
    }
}

std::string join_lambdas(std::span<const double> lambdas) {
    std::string out;
    for (double l : lambdas) {
        if (!out.empty()) {
            out += ';';
        }
        out += format_real(l);
    }
    return out;
}

void require_lambdas(std::span<const double> lambdas) {
    if (lambdas.empty()) {
        throw std::invalid_argument("at least one lambda is required");
    }
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw std::invalid_argument("lambda must be > 0, got " + format_real(l));
        }
    }
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    // Fixed mapping from 53 random bits, independent of the library's
    // distribution implementation.
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

}  // namespace

std::vector<Sample> sample_library(const Grid& grid, std::uint64_t seed, std::size_t count,
                                   bool vanish_at_left) {
    std::mt19937_64 rng(seed);
    const double a = grid.a();
    const double b = grid.b();
    const double span = b - a;
    std::vector<Sample> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double amp = uniform(rng, 0.5, 2.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
        std::function<double(double)> fn;
        std::string kind;
        switch (k % 4) {
            case 0: {
                const double centre = uniform(rng, a, b);
                const double width = uniform(rng, 0.5, 2.0) * std::max(1.0, span / 20.0);
                fn = [=](double x) {
                    const double u = (x - centre) / width;
                    return amp * std::exp(-u * u);
                };
                kind = "bump";
                break;
            }
            case 1: {
                const double centre = uniform(rng, a, b);
                const double width = uniform(rng, 0.5, 2.0) * std::max(1.0, span / 20.0);
                fn = [=](double x) { return amp * 0.5 * (1.0 + std::tanh((x - centre) / width)); };
                kind = "ramp";
                break;
            }
            case 2: {
                const double rate = uniform(rng, 0.2, 2.0) * std::min(1.0, 20.0 / span);
                fn = [=](double x) { return amp * std::exp(-rate * (x - a)); };
                kind = "exponential";
                break;
            }
            default: {
                const double scale = std::min(1.0, 20.0 / span);
                const double p = uniform(rng, 0.2, 2.0) * scale;
                const double q = uniform(rng, 0.2, 2.0) * scale;
                const double phase = uniform(rng, 0.0, 2.0 * kPi);
                fn = [=](double x) { return amp * std::sin(p * x + phase) * std::cos(q * x); };
                kind = "trig";
                break;
            }
        }
        if (vanish_at_left) {
            const double rate = 2.0 * std::min(1.0, 20.0 / span);
            fn = [fn, a, rate](double x) { return -std::expm1(-rate * (x - a)) * fn(x); };
        }
        out.push_back({"seed" + std::to_string(seed) + "#" + std::to_string(k) + ":" + kind,
                       GridFunction::sample(grid, fn)});
    }
    return out;
}

std::vector<Sample> as_samples(std::span<const GridFunction> functions, const std::string& prefix) {
    std::vector<Sample> out;
    out.reserve(functions.size());
    for (std::size_t k = 0; k < functions.size(); ++k) {
        out.push_back({prefix + "#" + std::to_string(k), functions[k]});
    }
    return out;
}

CheckReport check_dissipative(const Generator& generator, std::span<const Sample> samples,
                              std::span<const double> lambdas, double tol) {
    require_lambdas(lambdas);
    require_in_domain(generator, samples);
    CheckReport report;
    report.check_name = "check_dissipative";
    report.tolerance = tol;
    report.add_parameter("generator", generator.label());
    report.add_parameter("lambdas", join_lambdas(lambdas));
    report.add_parameter("samples", static_cast<double>(samples.size()));
    for (const auto& sample : samples) {
        const auto af = generator.apply(sample.f);
        const double norm_f = sup_norm(sample.f);
        for (double lambda : lambdas) {
            const double lhs = sup_norm(lambda * sample.f - af);
            const double rhs = lambda * norm_f;
            if (lhs < rhs - tol * std::max(1.0, rhs)) {
                report.add_witness({sample.id, lambda, std::nullopt, lhs, rhs});
            }
        }
    }
    return report;
}

CheckReport check_bi_dissipative(const Generator& generator, const CompactSeminormFamily& family,
                                 std::span<const Sample> samples, std::span<const double> lambdas,
                                 double tol) {
    require_lambdas(lambdas);
    require_in_domain(generator, samples);
    CheckReport report;
    report.check_name = "check_bi_dissipative";
    report.tolerance = tol;
    report.add_parameter("generator", generator.label());
    report.add_parameter("family", family.name());
    report.add_parameter("lambdas", join_lambdas(lambdas));
    report.add_parameter("samples", static_cast<double>(samples.size()));
    double worst_norming = 0.0;
    for (const auto& sample : samples) {
        const auto af = generator.apply(sample.f);
        for (double lambda : lambdas) {
            const auto shifted = lambda * sample.f - af;
            for (std::size_t n = 1; n <= family.max_index(); ++n) {
                const double lhs = eval_pn(family, n, shifted);
                const double rhs = lambda * eval_pn(family, n, sample.f);
                if (lhs < rhs - tol * std::max(1.0, rhs)) {
                    report.add_witness({sample.id, lambda, n, lhs, rhs});
                }
            }
        }
        if (family.covers(sample.f.grid())) {
            const double residual = norming_residual(family, sample.f);
            worst_norming = std::max(worst_norming, residual);
            if (residual > 0.0) {
                report.add_witness({sample.id + ":norming", 0.0, std::nullopt, residual, 0.0});
            }
        }
    }
    if (!samples.empty() && family.covers(samples.front().f.grid())) {
        report.add_parameter("norming_residual", worst_norming);
    } else {
        report.notes.push_back("norming residual not checked: window N does not cover the grid");
    }
    return report;
}

CheckReport check_resolvent_contraction(const Generator& generator,
                                        const CompactSeminormFamily& family,
                                        std::span<const Sample> samples,
                                        std::span<const double> lambdas, double tol) {
    require_lambdas(lambdas);
    if (!generator.has_resolvent()) {
        throw ResolventUnavailable(generator.label());
    }
    CheckReport report;
    report.check_name = "check_resolvent_contraction";
    report.tolerance = tol;
    report.add_parameter("generator", generator.label());
    report.add_parameter("family", family.name());
    report.add_parameter("lambdas", join_lambdas(lambdas));
    report.add_parameter("samples", static_cast<double>(samples.size()));
    double worst_margin = -std::numeric_limits<double>::infinity();
    for (const auto& sample : samples) {
        for (double lambda : lambdas) {
            const auto rg = generator.resolvent(lambda, sample.f);
            for (std::size_t n = 1; n <= family.max_index(); ++n) {
                const double lhs = lambda * eval_pn(family, n, rg);
                const double rhs = eval_pn(family, n, sample.f);
                worst_margin = std::max(worst_margin, lhs - rhs);
                if (lhs > rhs + tol) {
                    report.add_witness({sample.id, lambda, n, lhs, rhs});
                }
            }
        }
    }
    if (!samples.empty()) {
        report.add_parameter("max_lhs_minus_rhs", worst_margin);
    }
    return report;
}

CheckReport check_hy_powers(const UpwindMatrix& matrix, std::span<const double> lambdas,
                            std::size_t n_max, double rel_tol) {
    require_lambdas(lambdas);
    if (n_max == 0) {
        throw std::invalid_argument("n_max must be >= 1");
    }
    CheckReport report;
    report.check_name = "check_hy_powers";
    report.tolerance = rel_tol;
    report.add_parameter("size", static_cast<double>(matrix.size));
    report.add_parameter("h", matrix.h);
    report.add_parameter("lambdas", join_lambdas(lambdas));
    report.add_parameter("n_max", static_cast<double>(n_max));
    const auto size = static_cast<Eigen::Index>(matrix.size);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(size, size);
    double worst_ratio = 0.0;
    for (double lambda : lambdas) {
        const Eigen::MatrixXd shifted = lambda * identity - matrix.entries;
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
        if (!lu.isInvertible()) {
            throw std::logic_error("lambda I - A_h is singular for lambda = " + format_real(lambda));
        }
        const Eigen::MatrixXd resolvent = lu.inverse();
        Eigen::MatrixXd power = identity;
        for (std::size_t n = 1; n <= n_max; ++n) {
            power = power * resolvent;
            const double norm = power.cwiseAbs().rowwise().sum().maxCoeff();
            const double bound = std::pow(lambda, -static_cast<double>(n));
            worst_ratio = std::max(worst_ratio, norm / bound);
            if (norm > bound * (1.0 + rel_tol)) {
                report.add_witness({"upwind", lambda, n, norm, bound});
            }
        }
    }
    report.add_parameter("max_norm_times_lambda_pow_n", worst_ratio);
    return report;
}

SubdifferentialResult subdifferential_test(const Generator& generator,
                                           const CompactSeminormFamily& family,
                                           const GridFunction& f, std::size_t n,
                                           std::span<const GridFunction> probes,
                                           std::optional<double> tol) {
    if (!generator.in_domain(f)) {
        throw std::invalid_argument("subdifferential test: f is outside the domain of " +
                                    generator.label());
    }
    const double pn = eval_pn(family, n, f);
    if (pn == 0.0) {
        throw std::invalid_argument("subdifferential test needs p_n(f) > 0");
    }
    const auto [lo, hi] = family.window(n);
    const auto [first, last] = f.grid().index_range(lo, hi);
    PointFunctional phi;
    for (std::size_t i = first; i <= last; ++i) {
        if (std::abs(f[i]) == pn) {
            phi = {i, f.grid().node(i), f[i] < 0.0 ? -1 : 1};
            break;
        }
    }
    const double h = f.grid().h();
    const double used_tol = tol.value_or(10.0 * h * h * std::max(1.0, pn));

    SubdifferentialResult result{{}, phi, 0.0};
    auto& report = result.report;
    report.check_name = "subdifferential_test";
    report.tolerance = used_tol;
    report.add_parameter("generator", generator.label());
    report.add_parameter("family", family.name());
    report.add_parameter("n", static_cast<double>(n));
    report.add_parameter("location", phi.location);
    report.add_parameter("sign", static_cast<double>(phi.sign));

    if (phi.pair(f) != pn) {
        report.add_witness({"membership:<f,phi>=p_n(f)", 0.0, n, phi.pair(f), pn});
    }
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const double lhs = std::abs(phi.pair(probes[k]));
        const double rhs = eval_pn(family, n, probes[k]);
        if (lhs > rhs) {
            report.add_witness({"membership:probe#" + std::to_string(k), 0.0, n, lhs, rhs});
        }
    }
    result.pairing = phi.pair(generator.apply(f));
    report.add_parameter("pairing", result.pairing);
    if (result.pairing > used_tol) {
        report.add_witness({"<Af,phi>", 0.0, n, result.pairing, used_tol});
    }
    return result;
}

CheckReport surjectivity_probe(const Generator& generator, std::span<const Sample> probes,
                               std::span<const double> lambdas, std::optional<double> tol) {
    require_lambdas(lambdas);
    const double h = generator.grid().h();
    CheckReport report;
    report.check_name = "surjectivity_probe";
    report.tolerance = tol.value_or(10.0 * h * h);
    report.add_parameter("generator", generator.label());
    report.add_parameter("lambdas", join_lambdas(lambdas));
    report.add_parameter("probes", static_cast<double>(probes.size()));
    if (!generator.has_resolvent()) {
        report.add_witness({"resolvent_unavailable", lambdas.front(), std::nullopt, 0.0, 0.0});
        report.notes.push_back("probe not run: no resolvent for " + generator.label());
        return report;
    }
    double worst = 0.0;
    for (const auto& probe : probes) {
        for (double lambda : lambdas) {
            const double scale = resolvent_residual_scale(lambda, probe.f);
            const auto f = generator.resolvent(lambda, probe.f);
            if (!generator.in_domain(f)) {
                report.add_witness({probe.id + ":domain", lambda, std::nullopt, std::abs(f[0]), 0.0});
            }
            const double residual = sup_norm(lambda * f - generator.apply(f) - probe.f);
            worst = std::max(worst, residual / scale);
            if (residual > report.tolerance * scale) {
                report.add_witness({probe.id, lambda, std::nullopt, residual,
                                    report.tolerance * scale});
            }
        }
    }
    report.notes.push_back(report.passed ? "probe passed" : "probe failed");
    report.add_parameter("max_relative_residual", worst);
    report.notes.push_back(
        "residual bound: tolerance * max(1, lambda^2 ||g||, lambda ||g'||, ||g''||)");
    return report;
}

namespace {

CheckReport merge_verdict(std::string subject, CheckReport leg1, CheckReport leg2,
                          const std::string& family_name) {
    CheckReport verdict;
    verdict.check_name = "lumer_phillips_verdict";
    verdict.tolerance = leg1.tolerance;
    verdict.add_parameter("generator", std::move(subject));
    verdict.add_parameter("family", family_name);
    for (const auto* leg : {&leg1, &leg2}) {
        for (auto w : leg->witnesses) {
            w.input_id = leg->check_name + "/" + w.input_id;
            verdict.add_witness(std::move(w));
        }
    }
    if (leg1.passed && leg2.passed) {
        verdict.notes.push_back("generator: bi-dissipative for " + family_name +
                                " and surjectivity probe passed");
    } else if (!leg1.passed) {
        verdict.notes.push_back("not bi-dissipative for " + family_name);
    } else {
        verdict.notes.push_back("surjectivity probe failed");
    }
    verdict.sub_reports.push_back(std::move(leg1));
    verdict.sub_reports.push_back(std::move(leg2));
    return verdict;
}

}  // namespace

CheckReport lumer_phillips_verdict(const Generator& generator, const CompactSeminormFamily& family,
                                   std::span<const Sample> samples,
                                   std::span<const double> lambdas,
                                   std::span<const Sample> surjectivity_probes, double tol) {
    auto leg1 = check_bi_dissipative(generator, family, samples, lambdas, tol);
    auto leg2 = surjectivity_probe(generator, surjectivity_probes, lambdas);
    return merge_verdict(generator.label(), std::move(leg1), std::move(leg2), family.name());
}

EdgeState random_edge_state(const Network& net, std::uint64_t seed) {
    EdgeState state{{}, 0.0};
    state.edges.reserve(net.n_edges());
    for (std::size_t j = 0; j < net.n_edges(); ++j) {
        auto samples = sample_library(net.grid(), seed * 1000003ULL + j, 1 + (j % 4), false);
        state.edges.push_back(std::move(samples.back().f));
    }
    return state;
}

CheckReport network_verdict(const Network& net, std::span<const double> lambdas,
                            std::uint64_t seed, std::size_t sample_count, double tol) {
    require_lambdas(lambdas);
    build_adjacency(net);
    const std::size_t n = net.grid().n_cells();
    const double h = net.grid().h();

    CheckReport leg1;
    leg1.check_name = "check_bi_dissipative";
    leg1.tolerance = tol;
    leg1.add_parameter("generator", "network");
    leg1.add_parameter("pairing", "chi = sign(f)");
    leg1.add_parameter("seed", static_cast<double>(seed));
    leg1.add_parameter("lambdas", join_lambdas(lambdas));

    CheckReport leg2;
    leg2.check_name = "surjectivity_probe";
    leg2.tolerance = 10.0 * h * h;
    leg2.add_parameter("generator", "network");
    leg2.add_parameter("seed", static_cast<double>(seed));
    leg2.add_parameter("lambdas", join_lambdas(lambdas));

    double worst_pairing = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sample_count; ++k) {
        const auto g = random_edge_state(net, seed + k);
        const std::string id = "seed" + std::to_string(seed + k);
        const double scale = std::max(1.0, supnorm_l1(g));
        for (double lambda : lambdas) {
            double residual_scale = 0.0;
            for (std::size_t j = 0; j < net.n_edges(); ++j) {
                const auto& q = net.absorption()[j].values();
                const double q_max = *std::max_element(q.begin(), q.end());
                const double q_min = *std::min_element(q.begin(), q.end());
                const double mu = std::max(lambda - q_min, lambda - q_max) / net.velocities()[j];
                residual_scale += resolvent_residual_scale(mu, g.edges[j]);
            }
            const auto solved = network_resolvent(net, lambda, g);
            const auto& f = solved.value;
            double pairing = 0.0;
            for (std::size_t j = 0; j < net.n_edges(); ++j) {
                pairing += net.velocities()[j] * (std::abs(f.edges[j][n]) - std::abs(f.edges[j][0]));
            }
            worst_pairing = std::max(worst_pairing, pairing);
            if (pairing > tol * scale) {
                leg1.add_witness({id, lambda, std::nullopt, pairing, 0.0});
            }
            if (solved.boundary_residual > 1e-9) {
                leg2.add_witness({id + ":boundary", lambda, std::nullopt, solved.boundary_residual,
                                  1e-9});
            }
            if (solved.equation_residual > leg2.tolerance * residual_scale) {
                leg2.add_witness({id, lambda, std::nullopt, solved.equation_residual,
                                  leg2.tolerance * residual_scale});
            }
        }
    }
    leg1.add_parameter("max_pairing", worst_pairing);
    leg2.notes.push_back(leg2.passed ? "probe passed" : "probe failed");
    return merge_verdict("network", std::move(leg1), std::move(leg2), "weak*-pairing chi=sign(f)");
}

GridFunction counterexample_ramp(const Grid& grid, std::size_t n) {
    if (n < 1) {
        throw std::invalid_argument("counterexample ramp needs n >= 1");
    }
    const auto edge = static_cast<double>(n);
    return GridFunction::sample(grid, [edge](double x) {
        if (x >= -edge) {
            return 0.0;
        }
        if (x <= -edge - 1.0) {
            return 1.0;
        }
        return -edge - x;
    });
}

TranslationCounterexample reproduce_translation_counterexample(std::size_t n, double lambda,
                                                               double x_min, std::size_t n_cells,
                                                               double tol) {
    if (n < 1) {
        throw std::invalid_argument("counterexample needs n >= 1");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("counterexample needs lambda > 0");
    }
    const Grid grid(-x_min, 0.0, n_cells);
    const auto f = counterexample_ramp(grid, n);
    const CompactSeminormFamily family(WindowOrientation::left, std::max<std::size_t>(n, 1));
    const auto rf = right_translation_resolvent(lambda, f);
    TranslationCounterexample out;
    out.p_n_of_f = eval_pn(family, n, f);
    out.p_1_of_rf = eval_pn(family, 1, rf);
    out.lower_bound = std::exp(-lambda * static_cast<double>(n + 1)) / lambda;
    out.passed = out.p_n_of_f == 0.0 && out.p_1_of_rf > 0.0 && out.p_1_of_rf >= out.lower_bound - tol;
    return out;
}

HeatCounterexample reproduce_heat_counterexample(std::size_t n, double lambda,
                                                 std::size_t n_cells) {
    if (n < 1 || !(lambda > 0.0)) {
        throw std::invalid_argument("heat counterexample needs n >= 1 and lambda > 0");
    }
    const auto r = static_cast<double>(n);
    const Grid grid(-r, r, n_cells);
    const auto generator = laplacian_generator(grid);
    const auto f = GridFunction::sample(grid, [](double x) { return x * x; });
    const CompactSeminormFamily family(WindowOrientation::symmetric, n);
    HeatCounterexample out;
    out.p_n_of_lambda_minus_a_f = eval_pn(family, n, lambda * f - generator.apply(f));
    out.p_n_of_f_over_lambda = eval_pn(family, n, f) / lambda;
    return out;
}

}  // namespace bicont

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "bicont/generation.hpp"
#include "bicont/network.hpp"
#include "bicont/semigroups.hpp"
#include "support/random_networks.hpp"

using namespace bicont;

namespace {

GridFunction sin2(const Grid& grid) {
    return GridFunction::sample(grid, [](double x) {
        const double s = std::sin(std::numbers::pi * x);
        return s * s;
    });
}

GridFunction constant(const Grid& grid, double v) {
    return GridFunction::sample(grid, [v](double) { return v; });
}

double state_gap(const EdgeState& a, const EdgeState& b) {
    double gap = 0.0;
    for (std::size_t j = 0; j < a.edges.size(); ++j) {
        gap = std::max(gap, sup_norm(a.edges[j] - b.edges[j]));
    }
    return gap;
}

// Seeded data vanishing at both edge ends, so f(1) = Bc f(0) holds and the
// orbit stays continuous.
EdgeState compatible_state(const Network& net, std::uint64_t seed) {
    auto u = random_edge_state(net, seed);
    const auto taper = GridFunction::sample(net.grid(), [](double x) { return 4.0 * x * (1.0 - x); });
    for (auto& e : u.edges) {
        std::vector<double> v(e.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = e[i] * taper[i];
        }
        e = GridFunction(e.grid(), std::move(v));
    }
    return u;
}

EdgeState pulse_on_first_edge(const Network& net) {
    auto u = zero_state(net);
    u.edges[0] = sin2(net.grid());
    return u;
}

// e0: v0 -> v1, e1: v1 -> v0, e2: v1 -> v2, e3: v2 -> v0.
Network split_network(double w_back, double w_on) {
    return Network(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}},
                   {{1, 0, w_back}, {2, 0, w_on}, {0, 1, 1.0}, {3, 2, 1.0}, {0, 3, 1.0}},
                   {1.0, 1.0, 1.0, 1.0}, zero_absorption(4, 100));
}

}  // namespace

TEST_CASE("adjacency of the line graph") {
    const auto b = build_adjacency(testnet::two_cycle(1.0, 1.0, 10));
    REQUIRE(b(0, 0) == 0.0);
    REQUIRE(b(0, 1) == 1.0);
    REQUIRE(b(1, 0) == 1.0);
    REQUIRE(b(1, 1) == 0.0);

    const auto split = build_adjacency(split_network(0.3, 0.7));
    REQUIRE(split(1, 0) == 0.3);
    REQUIRE(split(2, 0) == 0.7);
    REQUIRE(split.col(0).sum() == 1.0);
}

TEST_CASE("sink vertices violate column stochasticity") {
    const Network sink(2, {{0, 1}}, {}, {1.0}, zero_absorption(1, 10));
    try {
        build_adjacency(sink);
        FAIL("expected a validation error");
    } catch (const NetworkValidationError& e) {
        REQUIRE(e.invariant().find("column sum") == 0);
        REQUIRE(std::string(e.what()).find("column sum 0 != 1") != std::string::npos);
        REQUIRE(e.location() == "column of edge 0");
    }
}

TEST_CASE("network validation") {
    const auto q = zero_absorption(2, 10);
    REQUIRE_THROWS_AS(Network(2, {{0, 0}}, {}, {1.0}, zero_absorption(1, 10)), NetworkValidationError);
    REQUIRE_THROWS_AS(Network(2, {{0, 1}, {0, 1}}, {}, {1.0, 1.0}, q), NetworkValidationError);
    REQUIRE_THROWS_AS(Network(2, {{0, 3}}, {}, {1.0}, zero_absorption(1, 10)), NetworkValidationError);
    REQUIRE_THROWS_AS(Network(2, {{0, 1}, {1, 0}}, {{1, 0, 1.5}}, {1.0, 1.0}, q),
                      NetworkValidationError);
    // e0 ends at v1 where e0 itself does not start.
    REQUIRE_THROWS_AS(Network(2, {{0, 1}, {1, 0}}, {{0, 0, 1.0}}, {1.0, 1.0}, q),
                      NetworkValidationError);
    REQUIRE_THROWS_AS(Network(2, {{0, 1}, {1, 0}}, {}, {1.0, 0.0}, q), NetworkValidationError);
    REQUIRE_THROWS_AS(Network(2, {{0, 1}, {1, 0}}, {}, {1.0}, q), NetworkValidationError);
}

TEST_CASE("velocity-weighted coupling") {
    const auto equal = testnet::two_cycle(2.5, 2.5, 10);
    REQUIRE((weighted_bc(equal, build_adjacency(equal)) - build_adjacency(equal)).norm() == 0.0);

    const auto mixed = testnet::two_cycle(1.0, 2.0, 10);
    const auto bc = weighted_bc(mixed, build_adjacency(mixed));
    REQUIRE(bc(0, 0) == 0.0);
    REQUIRE(bc(0, 1) == 2.0);
    REQUIRE(bc(1, 0) == 0.5);
    REQUIRE(bc(1, 1) == 0.0);
    const Eigen::Vector2d c(1.0, 2.0);
    REQUIRE((bc.transpose() * c - c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random networks satisfy the structural invariants") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto net = testnet::random_column_stochastic(seed, 5 + seed % 60);
        const auto b = build_adjacency(net);
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            REQUIRE(std::abs(b.col(j).sum() - 1.0) <= 1e-12);
        }
        Eigen::VectorXd c(net.n_edges());
        for (std::size_t j = 0; j < net.n_edges(); ++j) {
            c(Eigen::Index(j)) = net.velocities()[j];
        }
        const auto bc = weighted_bc(net, b);
        REQUIRE((bc.transpose() * c - c).cwiseAbs().maxCoeff() <= 1e-12);

        // Power iteration on a positive vector: the l1 growth ratio is 1.
        Eigen::VectorXd v = Eigen::VectorXd::Ones(b.cols());
        for (int k = 0; k < 50; ++k) {
            const Eigen::VectorXd next = b * v;
            REQUIRE(next.lpNorm<1>() / v.lpNorm<1>() <= 1.0 + 1e-9);
            v = next;
        }
    }
}

TEST_CASE("characteristics on the 2-cycle") {
    const auto net = testnet::two_cycle(1.0, 1.0, 400);
    const auto u0 = pulse_on_first_edge(net);
    REQUIRE(state_gap(step_characteristics(net, u0, 0.0), u0) == 0.0);

    const auto u1 = step_characteristics(net, u0, 1.0);
    REQUIRE(sup_norm(u1.edges[0]) <= 1e-12);
    REQUIRE(sup_norm(u1.edges[1] - u0.edges[0]) <= 1e-12);
    REQUIRE(state_gap(step_characteristics(net, u0, 2.0), u0) <= 1e-9);

    for (double t : {0.1, 0.37, 1.0, 1.5, 2.0, 7.3}) {
        REQUIRE(std::abs(total_mass(step_characteristics(net, u0, t)) - 0.5) <= 1e-12);
    }
}

TEST_CASE("single cycles are periodic with period equal to their length") {
    for (std::size_t length : {3u, 5u}) {
        std::vector<Edge> edges;
        std::vector<WeightEntry> weights;
        for (std::size_t k = 0; k < length; ++k) {
            edges.push_back({k, (k + 1) % length});
            weights.push_back({(k + 1) % length, k, 1.0});
        }
        const Network net(length, edges, weights, std::vector<double>(length, 1.0),
                          zero_absorption(length, 200));
        const auto u0 = compatible_state(net, length);
        REQUIRE(state_gap(step_characteristics(net, u0, double(length)), u0) <= 1e-9);
    }
}

TEST_CASE("network semigroup law") {
    const auto net = testnet::random_column_stochastic(7, 9, 0.5, 4.0, 400);
    const auto s = network_semigroup(net);
    REQUIRE_FALSE(s.contraction());
    const auto u0 = compatible_state(net, 3);
    double lip = 0.0;
    for (const auto& e : u0.edges) {
        for (std::size_t i = 1; i < e.size(); ++i) {
            lip = std::max(lip, std::abs(e[i] - e[i - 1]) / net.grid().h());
        }
    }
    const double bound = 2.0 * net.grid().h() * lip;
    for (auto [a, b] : {std::pair{0.13, 0.29}, std::pair{0.5, 1.25}}) {
        const auto composed = s.apply(b, s.apply(a, u0));
        const auto direct = s.apply(a + b, u0);
        REQUIRE(state_gap(composed, direct) <= bound);
    }
}

TEST_CASE("absorption follows the printed sign") {
    std::vector<GridFunction> q{constant(Grid(0.0, 1.0, 400), -1.0), constant(Grid(0.0, 1.0, 400), -1.0)};
    const Network net(2, {{0, 1}, {1, 0}}, {{1, 0, 1.0}, {0, 1, 1.0}}, {1.0, 1.0}, q);
    const auto u = step_characteristics(net, pulse_on_first_edge(net), 1.0);
    REQUIRE(std::abs(total_mass(u) - 0.5 * std::exp(-1.0)) <= 1e-12);
    REQUIRE(network_semigroup(net).contraction());
}

TEST_CASE("upwind scheme") {
    const auto net = testnet::two_cycle(1.0, 1.0, 400);
    const auto u0 = pulse_on_first_edge(net);
    const double h = net.grid().h();

    auto exact = u0;
    auto upwind = u0;
    for (int k = 0; k < 250; ++k) {
        upwind = step_upwind(net, upwind, h);
    }
    exact = step_characteristics(net, u0, 250 * h);
    REQUIRE(state_gap(upwind, exact) <= 1e-12);

    auto v = u0;
    const double dt = 0.9 * h;
    double drift = 0.0;
    for (int k = 0; k * dt < 10.0; ++k) {
        v = step_upwind(net, v, dt);
        drift = std::max(drift, std::abs(total_mass(v) - 0.5) / 0.5);
    }
    REQUIRE(drift <= 1e-3);

    REQUIRE(supnorm_l1(step_upwind(net, zero_state(net), dt)) == 0.0);
    try {
        step_upwind(net, u0, 1.5 * h);
        FAIL("expected a CFL violation");
    } catch (const std::invalid_argument& e) {
        REQUIRE(std::string(e.what()).find("CFL") != std::string::npos);
    }
}

TEST_CASE("network resolvent") {
    const auto cycle = testnet::two_cycle(1.0, 1.0, 400);
    EdgeState ones{{constant(cycle.grid(), 1.0), constant(cycle.grid(), 1.0)}};
    const auto r = network_resolvent(cycle, 1.0, ones);
    REQUIRE(state_gap(r.value, ones) <= 1e-8);
    REQUIRE(r.boundary_residual <= 1e-9);
    REQUIRE(r.condition_number >= 1.0);

    REQUIRE(supnorm_l1(network_resolvent(cycle, 1.0, zero_state(cycle)).value) == 0.0);
    REQUIRE_THROWS_AS(network_resolvent(cycle, 0.0, ones), std::invalid_argument);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto net = testnet::random_three_edge(seed, 0.5 + 0.3 * double(seed), 400);
        const auto g = random_edge_state(net, seed + 100);
        for (double lambda : {1.0, 5.0}) {
            const auto solved = network_resolvent(net, lambda, g);
            REQUIRE(lambda * supnorm_l1(solved.value) <= supnorm_l1(g) * (1.0 + 1e-6));
            REQUIRE(solved.boundary_residual <= 1e-9);
        }
    }
}

TEST_CASE("mixed velocities break the sup-l1 contraction") {
    // Bc rescales the density crossing a vertex by c_k / c_j, so a slow edge
    // fed by a fast one can exceed ||g|| / lambda.
    const auto net = testnet::two_cycle(1.0, 2.0, 400);
    EdgeState g{{constant(net.grid(), 0.0), constant(net.grid(), 1.0)}};
    const auto r = network_resolvent(net, 1.0, g);
    REQUIRE(r.boundary_residual <= 1e-9);
    REQUIRE(supnorm_l1(r.value) > 1.1 * supnorm_l1(g));
}

TEST_CASE("Laplace transform of the characteristics semigroup") {
    const auto net = testnet::random_three_edge(4, 1.0, 200);
    const auto g = compatible_state(net, 9);
    const auto exact = network_resolvent(net, 1.0, g);
    const auto laplace = laplace_resolvent(network_semigroup(net), 1.0, g, 20.0, 4000);
    REQUIRE(state_gap(laplace.value, exact.value) <= 1e-3);
}

TEST_CASE("mass and sup-l1 norm") {
    const auto net = testnet::two_cycle(1.0, 1.0, 1000);
    REQUIRE(total_mass(zero_state(net)) == 0.0);
    REQUIRE(std::abs(total_mass(pulse_on_first_edge(net)) - 0.5) <= 1e-6);

    const auto& grid = net.grid();
    REQUIRE(supnorm_l1(zero_state(net)) == 0.0);
    EdgeState ramps{{GridFunction::sample(grid, [](double x) { return x; }),
                     GridFunction::sample(grid, [](double x) { return 1.0 - x; })}};
    REQUIRE(std::abs(supnorm_l1(ramps) - 1.0) <= 1e-15);
    const auto sine = GridFunction::sample(grid, [](double x) { return std::sin(std::numbers::pi * x); });
    REQUIRE(supnorm_l1(EdgeState{{sine, sine}}) == 2.0);
}

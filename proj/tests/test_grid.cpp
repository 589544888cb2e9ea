#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "bicont/generation.hpp"
#include "bicont/grid.hpp"
#include "support/oracles.hpp"

using namespace bicont;
using Catch::Approx;

TEST_CASE("grid nodes are a + (b - a) i / n") {
    const Grid grid(-10.0, 0.0, 4000);
    const auto x = oracle::nodes(-10.0, 0.0, 4000);
    REQUIRE(grid.size() == 4001);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(grid.node(i) == x[i]);
    }
    REQUIRE(grid.node(3200) == -2.0);
    REQUIRE(grid.node(0) == -10.0);
    REQUIRE(grid.node(4000) == 0.0);
}

TEST_CASE("grid rejects degenerate input") {
    REQUIRE_THROWS_AS(Grid(1.0, 1.0, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(2.0, 1.0, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(0.0, 1.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(0.0, INFINITY, 10), std::invalid_argument);
}

TEST_CASE("grid function invariants") {
    const Grid grid(0.0, 1.0, 4);
    REQUIRE_THROWS_AS(GridFunction(grid, {1.0, 2.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(GridFunction(grid, {0.0, 0.0, NAN, 0.0, 0.0}), std::invalid_argument);
    const GridFunction f(grid, {0.0, 1.0, 2.0, 3.0, 4.0});
    REQUIRE(f.interpolate(0.125) == Approx(0.5));
    REQUIRE(f.interpolate(-3.0) == 0.0);
    REQUIRE(f.interpolate(7.0) == 4.0);
    REQUIRE(f.interpolate(0.5) == 2.0);
}

TEST_CASE("index_range tolerates rounding at window edges") {
    const Grid grid(0.0, 1.0, 10);
    const auto [lo, hi] = grid.index_range(0.3, 0.7);
    REQUIRE(lo == 3);
    REQUIRE(hi == 7);
    const auto empty = grid.index_range(0.31, 0.39);
    REQUIRE(empty.first > empty.second);
}

TEST_CASE("integrate") {
    SECTION("zero") {
        REQUIRE(integrate(GridFunction::zero(Grid(0.0, 1.0, 17))) == 0.0);
    }
    SECTION("affine is exact") {
        const Grid grid(0.0, 1.0, 10);
        REQUIRE(integrate(GridFunction::sample(grid, [](double x) { return x; })) ==
                Approx(0.5).epsilon(1e-15));
    }
    SECTION("sin^2 against its antiderivative") {
        const Grid grid(0.0, 1.0, 1000);
        const auto antiderivative = [](double x) {
            return x / 2.0 - std::sin(2.0 * std::numbers::pi * x) / (4.0 * std::numbers::pi);
        };
        const auto f = GridFunction::sample(grid, [](double x) {
            const double s = std::sin(std::numbers::pi * x);
            return s * s;
        });
        REQUIRE(std::abs(integrate(f) - (antiderivative(1.0) - antiderivative(0.0))) <= 1e-6);
    }
}

TEST_CASE("differentiate") {
    SECTION("constant") {
        const auto d = differentiate(GridFunction::sample(Grid(0.0, 3.0, 30), [](double) {
            return 7.0;
        }));
        REQUIRE(sup_norm(d) == 0.0);
    }
    SECTION("quadratic is exact including endpoints") {
        const Grid grid(-2.0, 2.0, 400);
        const auto d = differentiate(GridFunction::sample(grid, [](double x) { return x * x; }));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            REQUIRE(std::abs(d[i] - 2.0 * grid.node(i)) <= 1e-10);
        }
    }
    SECTION("exponential against closed form") {
        const Grid grid(0.0, 1.0, 1000);
        const auto d = differentiate(GridFunction::sample(grid, [](double x) { return std::exp(x); }));
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(d[i] - std::exp(grid.node(i))));
        }
        REQUIRE(worst <= 5e-6);
    }
}

TEST_CASE("second derivative") {
    const Grid grid(-2.0, 2.0, 4000);
    const auto q = second_derivative(GridFunction::sample(grid, [](double x) { return x * x; }));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(std::abs(q[i] - 2.0) <= 1e-6);
    }
    const auto s = second_derivative(GridFunction::sample(grid, [](double x) { return std::sin(x); }));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(s[i] + std::sin(grid.node(i))));
    }
    REQUIRE(worst <= 1e-6);
    const auto c = second_derivative(GridFunction::sample(Grid(0.0, 1.0, 3), [](double) {
        return 4.0;
    }));
    REQUIRE(sup_norm(c) == 0.0);
}

TEST_CASE("window_sup") {
    SECTION("increasing function peaks at the right window edge") {
        const Grid grid(0.0, 5.0, 50);
        REQUIRE(window_sup(GridFunction::sample(grid, [](double x) { return x; }), 0.0, 2.0) == 2.0);
    }
    SECTION("zero function") {
        REQUIRE(window_sup(GridFunction::zero(Grid(-1.0, 1.0, 8)), -0.5, 0.5) == 0.0);
    }
    SECTION("ramp vanishes on its support window") {
        const Grid grid(-10.0, 0.0, 4000);
        REQUIRE(window_sup(counterexample_ramp(grid, 2), -2.0, 0.0) == 0.0);
    }
    SECTION("empty intersection is rejected") {
        const Grid grid(0.0, 1.0, 10);
        REQUIRE_THROWS_AS(window_sup(GridFunction::zero(grid), 2.0, 3.0), std::invalid_argument);
    }
    SECTION("agrees with a brute-force scan") {
        const Grid grid(0.0, 20.0, 4000);
        const auto samples = sample_library(grid, 7, 12, false);
        const auto x = oracle::nodes(0.0, 20.0, 4000);
        for (const auto& s : samples) {
            const std::vector<double> v(s.f.values().begin(), s.f.values().end());
            for (double hi : {0.5, 1.0, 3.3, 10.0, 20.0}) {
                REQUIRE(window_sup(s.f, 0.0, hi) == oracle::brute_window_sup(x, v, 0.0, hi));
            }
        }
    }
}

TEST_CASE("csv output") {
    const Grid grid(0.0, 1.0, 2);
    std::ostringstream out;
    write_csv(out, GridFunction(grid, {0.1, 0.2, 1.0 / 3.0}));
    REQUIRE(out.str() ==
            "x,value\n0,0.10000000000000001\n0.5,0.20000000000000001\n1,0.33333333333333331\n");
}

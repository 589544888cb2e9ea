#pragma once

// Concrete generators on sampled functions: the shift generator on a
// half-line with zero inflow, the right-translation generator on a
// left half-line, and the Laplacian on a symmetric interval. Half-lines
// are truncated to finite grids.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "bicont/grid.hpp"

namespace bicont {

/// Raised when a resolvent is requested from a generator that has none.
class ResolventUnavailable : public std::logic_error {
public:
    explicit ResolventUnavailable(const std::string& label)
        : std::logic_error("resolvent unavailable for this generator: " + label) {}
};

class Generator {
public:
    using Apply = std::function<GridFunction(const GridFunction&)>;
    using Resolvent = std::function<GridFunction(double, const GridFunction&)>;
    using DomainCheck = std::function<bool(const GridFunction&)>;

    Generator(std::string label, Grid grid, Apply apply, std::optional<Resolvent> resolvent,
              DomainCheck domain_check);

    const std::string& label() const noexcept { return label_; }
    const Grid& grid() const noexcept { return grid_; }

    GridFunction apply(const GridFunction& f) const { return apply_(f); }
    bool has_resolvent() const noexcept { return resolvent_.has_value(); }

    /// R(lambda, A) g. Throws ResolventUnavailable if the generator has none
    /// and std::invalid_argument for lambda <= 0.
    GridFunction resolvent(double lambda, const GridFunction& g) const;

    bool in_domain(const GridFunction& f) const { return domain_check_(f); }

private:
    std::string label_;
    Grid grid_;
    Apply apply_;
    std::optional<Resolvent> resolvent_;
    DomainCheck domain_check_;
};

/// A f = -f' on [0, X_max] with f(0) = 0. Generates translation to the
/// right with zero inflow at x = 0.
Generator left_shift_generator(const Grid& domain);

/// A f = -f' on [-X_min, 0], no boundary condition. Generates
/// (T(t) f)(x) = f(x - t).
Generator right_translation_generator(const Grid& domain);

/// A f = f''. No resolvent.
Generator laplacian_generator(const Grid& domain);

/// (R(lambda) g)(x) = ∫_0^x e^{lambda (t - x)} g(t) dt at every node.
/// Each cell is integrated exactly against the linear interpolant of g, so
/// lambda * |R g| <= max |g| holds without discretization slack.
GridFunction resolvent_shift(double lambda, const GridFunction& g);

/// (R(lambda) g)(x) = ∫_{-inf}^x e^{-lambda (x - s)} g(s) ds, with g extended
/// by its leftmost value below the grid (tail term g(a) e^{-lambda (x - a)} / lambda).
GridFunction right_translation_resolvent(double lambda, const GridFunction& g);

/// Dense surrogate for the shift generator: A_h f|_i = -(f_i - f_{i-1}) / h
/// with the inflow value f_0 = 0 eliminated.
struct UpwindMatrix {
    std::size_t size = 0;
    double h = 0.0;
    Eigen::MatrixXd entries;
};

UpwindMatrix upwind_discretize(const std::string& label, std::size_t n, double h);

}  // namespace bicont

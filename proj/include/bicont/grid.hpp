#pragma once

// Uniform one-dimensional grids and sampled functions on them.
//
// A GridFunction is the concrete stand-in for an element of a space of
// bounded continuous (or essentially bounded) functions on an interval.
// Everything downstream (seminorms, generators, semigroups, network edge
// states) is built from these values.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace bicont {

/// Uniform grid on [a, b] with n_cells cells and n_cells + 1 nodes.
class Grid {
public:
    Grid(double a, double b, std::size_t n_cells);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t n_cells() const noexcept { return n_cells_; }
    std::size_t size() const noexcept { return n_cells_ + 1; }
    double h() const noexcept { return (b_ - a_) / static_cast<double>(n_cells_); }

    /// Node i, computed as a + (b - a) * i / n_cells so that nodes which are
    /// representable (e.g. -2 on [-10, 0] with 4000 cells) come out exact.
    double node(std::size_t i) const noexcept;

    /// Node indices lying in [lo, hi] (with a tolerance of 1e-9 h on both
    /// ends). Returns an empty range as first > last.
    std::pair<std::size_t, std::size_t> index_range(double lo, double hi) const noexcept;

    bool operator==(const Grid& other) const noexcept = default;

private:
    double a_;
    double b_;
    std::size_t n_cells_;
};

/// Node values of a function on a Grid. Immutable once built.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);

    /// Samples fn at every node.
    static GridFunction sample(const Grid& grid, const std::function<double(double)>& fn);
    static GridFunction zero(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Piecewise-linear interpolation; x is clamped to [a, b]. Points within
    /// 1e-9 cells of a node read that node exactly.
    double interpolate(double x) const noexcept;

    GridFunction operator+(const GridFunction& other) const;
    GridFunction operator-(const GridFunction& other) const;
    GridFunction operator-() const;
    friend GridFunction operator*(double s, const GridFunction& f);

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Composite trapezoid rule over [a, b]. Exact for affine functions.
double integrate(const GridFunction& f);

/// Central differences in the interior, second-order one-sided stencils at
/// both endpoints. Exact for quadratics.
GridFunction differentiate(const GridFunction& f);

/// Second derivative: three-point stencil in the interior, five-point
/// one-sided stencil at the endpoints (three-point when n_cells < 4).
/// Exact for quadratics.
GridFunction second_derivative(const GridFunction& f);

/// max |f| over the nodes in [lo, hi] ∩ [a, b]. Throws std::invalid_argument
/// if no node lies in the intersection.
double window_sup(const GridFunction& f, double lo, double hi);

/// Discrete sup-norm over all nodes.
double sup_norm(const GridFunction& f) noexcept;

/// Writes "x,value" followed by one row per node, 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& f);

}  // namespace bicont

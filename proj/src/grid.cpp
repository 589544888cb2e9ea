#include "bicont/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "bicont/format.hpp"

namespace bicont {

Grid::Grid(double a, double b, std::size_t n_cells) : a_(a), b_(b), n_cells_(n_cells) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw std::invalid_argument("grid requires finite endpoints with a < b");
    }
    if (n_cells < 2) {
        throw std::invalid_argument("grid requires at least 2 cells");
    }
}

double Grid::node(std::size_t i) const noexcept {
    if (i >= n_cells_) {
        return b_;
    }
    return a_ + (b_ - a_) * static_cast<double>(i) / static_cast<double>(n_cells_);
}

std::pair<std::size_t, std::size_t> Grid::index_range(double lo, double hi) const noexcept {
    const double step = h();
    const double eps = 1e-9;
    const double first = std::ceil((lo - a_) / step - eps);
    const double last = std::floor((hi - a_) / step + eps);
    const double clamped_first = std::max(first, 0.0);
    const double clamped_last = std::min(last, static_cast<double>(n_cells_));
    if (clamped_first > clamped_last) {
        return {1, 0};
    }
    return {static_cast<std::size_t>(clamped_first), static_cast<std::size_t>(clamped_last)};
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("grid function needs n_cells + 1 values, got " +
                                    std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("grid function value at node " + std::to_string(i) +
                                        " is not finite");
        }
    }
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(double)>& fn) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = fn(grid.node(i));
    }
    return GridFunction(grid, std::move(values));
}

GridFunction GridFunction::zero(const Grid& grid) {
    return GridFunction(grid, std::vector<double>(grid.size(), 0.0));
}

double GridFunction::interpolate(double x) const noexcept {
    const double pos = (x - grid_.a()) / grid_.h();
    if (pos <= 0.0) {
        return values_.front();
    }
    const auto n = static_cast<double>(grid_.n_cells());
    if (pos >= n) {
        return values_.back();
    }
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-9) {
        return values_[static_cast<std::size_t>(nearest)];
    }
    const auto i = static_cast<std::size_t>(pos);
    const double theta = pos - static_cast<double>(i);
    return (1.0 - theta) * values_[i] + theta * values_[i + 1];
}

namespace {

void require_same_grid(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid())) {
        throw std::invalid_argument("grid functions live on different grids");
    }
}

}  // namespace

GridFunction GridFunction::operator+(const GridFunction& other) const {
    require_same_grid(*this, other);
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = values_[i] + other.values_[i];
    }
    return GridFunction(grid_, std::move(out));
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
    require_same_grid(*this, other);
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = values_[i] - other.values_[i];
    }
    return GridFunction(grid_, std::move(out));
}

GridFunction GridFunction::operator-() const {
    return -1.0 * *this;
}

GridFunction operator*(double s, const GridFunction& f) {
    std::vector<double> out(f.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = s * f.values_[i];
    }
    return GridFunction(f.grid_, std::move(out));
}

double integrate(const GridFunction& f) {
    const auto v = f.values();
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        interior += v[i];
    }
    return f.grid().h() * (interior + 0.5 * (v.front() + v.back()));
}

GridFunction differentiate(const GridFunction& f) {
    const auto v = f.values();
    const std::size_t n = v.size() - 1;
    const double h = f.grid().h();
    std::vector<double> d(v.size());
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (std::size_t i = 1; i < n; ++i) {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    return GridFunction(f.grid(), std::move(d));
}

GridFunction second_derivative(const GridFunction& f) {
    const auto v = f.values();
    const std::size_t n = v.size() - 1;
    const double h2 = f.grid().h() * f.grid().h();
    std::vector<double> d(v.size());
    for (std::size_t i = 1; i < n; ++i) {
        d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    }
    if (n >= 4) {
        d[0] = (35.0 * v[0] - 104.0 * v[1] + 114.0 * v[2] - 56.0 * v[3] + 11.0 * v[4]) / (12.0 * h2);
        d[n] = (35.0 * v[n] - 104.0 * v[n - 1] + 114.0 * v[n - 2] - 56.0 * v[n - 3] +
                11.0 * v[n - 4]) /
               (12.0 * h2);
    } else {
        d[0] = (v[0] - 2.0 * v[1] + v[2]) / h2;
        d[n] = (v[n] - 2.0 * v[n - 1] + v[n - 2]) / h2;
    }
    return GridFunction(f.grid(), std::move(d));
}

double window_sup(const GridFunction& f, double lo, double hi) {
    const auto [first, last] = f.grid().index_range(lo, hi);
    if (first > last) {
        throw std::invalid_argument("window [" + format_real(lo) + ", " + format_real(hi) +
                                    "] contains no node of the grid");
    }
    const auto v = f.values();
    double best = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        best = std::max(best, std::abs(v[i]));
    }
    return best;
}

double sup_norm(const GridFunction& f) noexcept {
    double best = 0.0;
    for (double x : f.values()) {
        best = std::max(best, std::abs(x));
    }
    return best;
}

void write_csv(std::ostream& out, const GridFunction& f) {
    out << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_real(f.grid().node(i)) << ',' << format_real(f[i]) << '\n';
    }
}

}  // namespace bicont

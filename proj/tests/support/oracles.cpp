#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

std::vector<double> nodes(double a, double b, std::size_t n_cells) {
    std::vector<double> x(n_cells + 1);
    for (std::size_t i = 0; i <= n_cells; ++i) {
        x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n_cells);
    }
    return x;
}

double brute_window_sup(const std::vector<double>& x, const std::vector<double>& v, double lo,
                        double hi) {
    double best = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= lo - 1e-12 && x[i] <= hi + 1e-12) {
            best = std::max(best, std::abs(v[i]));
        }
    }
    return best;
}

double shift_resolvent_of_one(double lambda, double x) {
    return (1.0 - std::exp(-lambda * x)) / lambda;
}

double shift_resolvent_of_sin(double lambda, double x) {
    return (lambda * std::sin(x) - std::cos(x) + std::exp(-lambda * x)) / (1.0 + lambda * lambda);
}

double translation_resolvent_of_ramp(double x) {
    return std::exp(-x) * std::exp(-3.0) * (std::numbers::e - 1.0);
}

double upwind_resolvent_norm(double lambda, double h, std::size_t size) {
    return (1.0 - std::pow(1.0 + lambda * h, -static_cast<double>(size))) / lambda;
}

double sin2_bump(double x, double start) {
    if (x <= start || x >= start + 1.0) {
        return 0.0;
    }
    const double s = std::sin(std::numbers::pi * (x - start));
    return s * s;
}

double simpson(const std::function<double(double)>& fn, double a, double b, std::size_t panels) {
    if (panels % 2 == 1) {
        ++panels;
    }
    const double h = (b - a) / static_cast<double>(panels);
    double sum = fn(a) + fn(b);
    for (std::size_t i = 1; i < panels; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * fn(a + h * static_cast<double>(i));
    }
    return sum * h / 3.0;
}

}  // namespace oracle

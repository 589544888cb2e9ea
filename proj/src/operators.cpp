#include "bicont/operators.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "bicont/detail/exponential_weights.hpp"
#include "bicont/format.hpp"

namespace bicont {

Generator::Generator(std::string label, Grid grid, Apply apply,
                     std::optional<Resolvent> resolvent, DomainCheck domain_check)
    : label_(std::move(label)),
      grid_(grid),
      apply_(std::move(apply)),
      resolvent_(std::move(resolvent)),
      domain_check_(std::move(domain_check)) {}

GridFunction Generator::resolvent(double lambda, const GridFunction& g) const {
    if (!resolvent_) {
        throw ResolventUnavailable(label_);
    }
    return (*resolvent_)(lambda, g);
}

namespace {

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("resolvent requires lambda > 0, got " + format_real(lambda));
    }
}

// f_0 = initial, f_i = e^{-lambda h} f_{i-1} + ∫ over cell i of e^{-lambda (x_i - s)} g(s) ds.
GridFunction exponential_sweep(double lambda, const GridFunction& g, double initial) {
    const auto v = g.values();
    const double h = g.grid().h();
    const double z = lambda * h;
    const double decay = std::exp(-z);
    const double w_near = h * detail::near_weight(z);
    const double w_far = h * detail::far_weight(z);

    std::vector<double> out(v.size());
    out[0] = initial;
    for (std::size_t i = 1; i < v.size(); ++i) {
        out[i] = decay * out[i - 1] + w_near * v[i] + w_far * v[i - 1];
    }
    return GridFunction(g.grid(), std::move(out));
}

}  // namespace

GridFunction resolvent_shift(double lambda, const GridFunction& g) {
    require_positive_lambda(lambda);
    return exponential_sweep(lambda, g, 0.0);
}

GridFunction right_translation_resolvent(double lambda, const GridFunction& g) {
    require_positive_lambda(lambda);
    return exponential_sweep(lambda, g, g[0] / lambda);
}

Generator left_shift_generator(const Grid& domain) {
    if (domain.a() != 0.0) {
        throw std::invalid_argument("left_shift generator needs a grid starting at 0");
    }
    return Generator(
        "left_shift", domain, [](const GridFunction& f) { return -differentiate(f); },
        [](double lambda, const GridFunction& g) { return resolvent_shift(lambda, g); },
        [](const GridFunction& f) { return std::abs(f[0]) <= 1e-12; });
}

Generator right_translation_generator(const Grid& domain) {
    if (domain.b() != 0.0) {
        throw std::invalid_argument("right_translation generator needs a grid ending at 0");
    }
    return Generator(
        "right_translation", domain, [](const GridFunction& f) { return -differentiate(f); },
        [](double lambda, const GridFunction& g) {
            return right_translation_resolvent(lambda, g);
        },
        [](const GridFunction&) { return true; });
}

Generator laplacian_generator(const Grid& domain) {
    return Generator(
        "laplacian", domain, [](const GridFunction& f) { return second_derivative(f); },
        std::nullopt, [](const GridFunction&) { return true; });
}

UpwindMatrix upwind_discretize(const std::string& label, std::size_t n, double h) {
    if (label != "left_shift") {
        throw std::invalid_argument("no upwind discretization for generator '" + label + "'");
    }
    if (n < 2 || !(h > 0.0)) {
        throw std::invalid_argument("upwind matrix needs n >= 2 and h > 0");
    }
    UpwindMatrix m;
    m.size = n;
    m.h = h;
    m.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        m.entries(i, i) = -1.0 / h;
        if (i > 0) {
            m.entries(i, i - 1) = 1.0 / h;
        }
    }
    return m;
}

}  // namespace bicont

#include "bicont/semigroups.hpp"

#include <vector>

namespace bicont {

namespace {

// Moves f to the right by t. Nodes whose source lies left of the grid take
// below(f); sources that land on a node within 1e-9 cells are read exactly.
template <typename Fill>
GridFunction translate(double t, const GridFunction& f, Fill below) {
    const Grid& grid = f.grid();
    const double cells = t / grid.h();
    const double nearest = std::round(cells);
    const bool aligned = std::abs(cells - nearest) < 1e-9;
    const auto v = f.values();
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double pos = static_cast<double>(i) - (aligned ? nearest : cells);
        if (pos < 0.0) {
            out[i] = below(f);
        } else if (aligned) {
            out[i] = v[static_cast<std::size_t>(pos)];
        } else {
            const auto k = static_cast<std::size_t>(pos);
            const double theta = pos - static_cast<double>(k);
            out[i] = k + 1 < v.size() ? (1.0 - theta) * v[k] + theta * v[k + 1] : v[k];
        }
    }
    return GridFunction(grid, std::move(out));
}

}  // namespace

GridFunction shift_semigroup_apply(double t, const GridFunction& f) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("shift semigroup time must be >= 0, got " + format_real(t));
    }
    return translate(t, f, [](const GridFunction&) { return 0.0; });
}

GridFunction right_translation_apply(double t, const GridFunction& f) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("translation time must be >= 0, got " + format_real(t));
    }
    return translate(t, f, [](const GridFunction& g) { return g[0]; });
}

Semigroup<GridFunction> shift_semigroup() {
    return {"left_shift", [](double t, const GridFunction& f) { return shift_semigroup_apply(t, f); },
            true};
}

Semigroup<GridFunction> right_translation_semigroup() {
    return {"right_translation",
            [](double t, const GridFunction& f) { return right_translation_apply(t, f); }, true};
}

GridFunction euler_apply(const Generator& generator, double t, std::size_t m,
                         const GridFunction& f) {
    if (!generator.has_resolvent()) {
        throw ResolventUnavailable(generator.label());
    }
    if (!(t > 0.0)) {
        throw std::invalid_argument("euler formula needs t > 0");
    }
    if (m == 0) {
        throw std::invalid_argument("euler formula needs m >= 1");
    }
    const double lambda = static_cast<double>(m) / t;
    GridFunction current = f;
    for (std::size_t k = 0; k < m; ++k) {
        current = lambda * generator.resolvent(lambda, current);
    }
    return current;
}

double orbit_integral_residual(const Generator& generator, const Semigroup<GridFunction>& semigroup,
                               double t, const GridFunction& f, std::size_t steps) {
    if (!(t > 0.0)) {
        throw std::invalid_argument("orbit integral needs t > 0");
    }
    if (steps == 0) {
        throw std::invalid_argument("orbit integral needs at least one time step");
    }
    const double ds = t / static_cast<double>(steps);
    GridFunction integral = (0.5 * ds) * f;
    GridFunction end = f;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double s = t * static_cast<double>(k) / static_cast<double>(steps);
        GridFunction orbit = semigroup.apply(s, f);
        const double weight = (k == steps ? 0.5 : 1.0) * ds;
        integral = integral + weight * orbit;
        if (k == steps) {
            end = std::move(orbit);
        }
    }
    return sup_norm(generator.apply(integral) - (end - f));
}

}  // namespace bicont

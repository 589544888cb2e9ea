#pragma once

// Exact translation semigroups, the Euler approximation
// T(t) f ≈ ((m/t) R(m/t, A))^m f, the Laplace-transform resolvent
// R(lambda) f = ∫_0^inf e^{-lambda s} T(s) f ds and the orbit-integral
// identity A ∫_0^t T(s) f ds = T(t) f - f.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "bicont/format.hpp"
#include "bicont/grid.hpp"
#include "bicont/operators.hpp"

namespace bicont {

template <typename State>
class Semigroup {
public:
    using Apply = std::function<State(double, const State&)>;

    Semigroup(std::string label, Apply apply, bool contraction)
        : label_(std::move(label)), apply_(std::move(apply)), contraction_(contraction) {}

    const std::string& label() const noexcept { return label_; }
    bool contraction() const noexcept { return contraction_; }

    /// T(t) f. T(0) f is f itself; t < 0 is rejected.
    State apply(double t, const State& f) const {
        if (!(t >= 0.0)) {
            throw std::invalid_argument("semigroup time must be >= 0, got " + format_real(t));
        }
        if (t == 0.0) {
            return f;
        }
        return apply_(t, f);
    }

private:
    std::string label_;
    Apply apply_;
    bool contraction_;
};

/// Sup-norm, used for tail bounds of Laplace resolvents.
inline double state_norm(const GridFunction& f) noexcept { return sup_norm(f); }

/// (T(t) f)(x) = f(x - t) for x >= t, 0 otherwise. Linear interpolation
/// between nodes.
GridFunction shift_semigroup_apply(double t, const GridFunction& f);

/// (T(t) f)(x) = f(x - t), constant extension of f below the grid.
GridFunction right_translation_apply(double t, const GridFunction& f);

Semigroup<GridFunction> shift_semigroup();
Semigroup<GridFunction> right_translation_semigroup();

/// Applies f -> (m/t) R(m/t, A) f exactly m times.
GridFunction euler_apply(const Generator& generator, double t, std::size_t m,
                         const GridFunction& f);

template <typename State>
struct LaplaceResolvent {
    State value;
    /// e^{-lambda H} ||f|| / lambda, the norm of the truncated tail.
    double tail_bound;
};

/// Trapezoid-in-time quadrature of ∫_0^H e^{-lambda s} T(s) f ds.
template <typename State>
LaplaceResolvent<State> laplace_resolvent(const Semigroup<State>& semigroup, double lambda,
                                          const State& f, double horizon, std::size_t steps) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("laplace resolvent requires lambda > 0");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("laplace resolvent requires a positive horizon");
    }
    if (steps == 0) {
        throw std::invalid_argument("laplace resolvent requires at least one time step");
    }
    const double ds = horizon / static_cast<double>(steps);
    State acc = (0.5 * ds) * f;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double s = horizon * static_cast<double>(k) / static_cast<double>(steps);
        const double weight = (k == steps ? 0.5 : 1.0) * ds * std::exp(-lambda * s);
        acc = acc + weight * semigroup.apply(s, f);
    }
    return {std::move(acc), std::exp(-lambda * horizon) * state_norm(f) / lambda};
}

/// sup-norm of A(∫_0^t T(s) f ds) - (T(t) f - f), orbit integral by the
/// trapezoid rule with `steps` time steps.
double orbit_integral_residual(const Generator& generator, const Semigroup<GridFunction>& semigroup,
                               double t, const GridFunction& f, std::size_t steps = 2000);

}  // namespace bicont

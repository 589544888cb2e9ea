#include "bicont/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bicont {

std::string to_string(WindowOrientation orientation) {
    switch (orientation) {
        case WindowOrientation::right:
            return "right_windows[0,n]";
        case WindowOrientation::left:
            return "left_windows[-n,0]";
        case WindowOrientation::symmetric:
            return "symmetric_windows[-n,n]";
    }
    return "unknown";
}

CompactSeminormFamily::CompactSeminormFamily(WindowOrientation orientation, std::size_t max_index)
    : orientation_(orientation), max_index_(max_index) {
    if (max_index == 0) {
        throw std::invalid_argument("seminorm family needs max_index >= 1");
    }
}

std::pair<double, double> CompactSeminormFamily::window(std::size_t n) const {
    if (n < 1 || n > max_index_) {
        throw std::out_of_range("seminorm index " + std::to_string(n) + " outside 1.." +
                                std::to_string(max_index_));
    }
    const auto r = static_cast<double>(n);
    switch (orientation_) {
        case WindowOrientation::right:
            return {0.0, r};
        case WindowOrientation::left:
            return {-r, 0.0};
        case WindowOrientation::symmetric:
            return {-r, r};
    }
    return {0.0, r};
}

std::string CompactSeminormFamily::name() const {
    return to_string(orientation_) + ",N=" + std::to_string(max_index_);
}

bool CompactSeminormFamily::covers(const Grid& grid) const noexcept {
    const auto [lo, hi] = window(max_index_);
    return lo <= grid.a() && grid.b() <= hi;
}

double eval_pn(const CompactSeminormFamily& family, std::size_t n, const GridFunction& f) {
    const auto [lo, hi] = family.window(n);
    return window_sup(f, lo, hi);
}

MixedSeminorm::MixedSeminorm(std::vector<double> weights, CompactSeminormFamily family)
    : weights_(std::move(weights)), family_(family) {
    if (weights_.size() != family_.max_index()) {
        throw std::invalid_argument("mixed seminorm needs one weight per seminorm index");
    }
    bool any_positive = false;
    for (double a : weights_) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument("mixed seminorm weights must be finite and >= 0");
        }
        any_positive = any_positive || a > 0.0;
    }
    if (!any_positive) {
        throw std::invalid_argument("mixed seminorm needs at least one positive weight");
    }
}

double eval_mixed(const MixedSeminorm& m, const GridFunction& f) {
    const auto& family = m.family();
    double best = 0.0;
    bool any_window = false;
    for (std::size_t n = 1; n <= family.max_index(); ++n) {
        const auto [lo, hi] = family.window(n);
        const auto [first, last] = f.grid().index_range(lo, hi);
        if (first > last) {
            continue;
        }
        any_window = true;
        best = std::max(best, m.weights()[n - 1] * eval_pn(family, n, f));
    }
    if (!any_window) {
        throw std::invalid_argument("no window of the mixed seminorm meets the grid");
    }
    return best;
}

double norming_residual(const CompactSeminormFamily& family, const GridFunction& f) {
    double sup_p = 0.0;
    for (std::size_t n = 1; n <= family.max_index(); ++n) {
        const auto [lo, hi] = family.window(n);
        const auto [first, last] = f.grid().index_range(lo, hi);
        if (first <= last) {
            sup_p = std::max(sup_p, eval_pn(family, n, f));
        }
    }
    return std::abs(sup_p - sup_norm(f));
}

}  // namespace bicont

#pragma once

// Compact-open seminorm families and mixed-topology seminorms.
//
// p_n(f) = sup of |f| over the n-th window; the family is truncated at a
// finite index N. Mixed seminorms are sup_n a_n p_n(f) with explicitly
// stored weights.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bicont/grid.hpp"

namespace bicont {

enum class WindowOrientation {
    right,      ///< [0, n]
    left,       ///< [-n, 0]
    symmetric,  ///< [-n, n]
};

std::string to_string(WindowOrientation orientation);

class CompactSeminormFamily {
public:
    CompactSeminormFamily(WindowOrientation orientation, std::size_t max_index);

    WindowOrientation orientation() const noexcept { return orientation_; }
    std::size_t max_index() const noexcept { return max_index_; }

    /// Window [lo, hi] of seminorm n; throws std::out_of_range unless 1 <= n <= N.
    std::pair<double, double> window(std::size_t n) const;

    /// Human-readable name, e.g. "right_windows[0,n],N=10".
    std::string name() const;

    /// True if the grid lies inside window N, so that sup_n p_n is the sup-norm.
    bool covers(const Grid& grid) const noexcept;

private:
    WindowOrientation orientation_;
    std::size_t max_index_;
};

double eval_pn(const CompactSeminormFamily& family, std::size_t n, const GridFunction& f);

class MixedSeminorm {
public:
    MixedSeminorm(std::vector<double> weights, CompactSeminormFamily family);

    const std::vector<double>& weights() const noexcept { return weights_; }
    const CompactSeminormFamily& family() const noexcept { return family_; }

private:
    std::vector<double> weights_;
    CompactSeminormFamily family_;
};

/// max_n a_n p_n(f). Windows that miss f's grid contribute nothing; at least
/// one window must intersect it.
double eval_mixed(const MixedSeminorm& m, const GridFunction& f);

/// |sup_n p_n(f) - ||f||_sup|. Zero whenever window N covers the grid.
double norming_residual(const CompactSeminormFamily& family, const GridFunction& f);

}  // namespace bicont

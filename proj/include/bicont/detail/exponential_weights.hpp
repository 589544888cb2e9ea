#pragma once

#include <cmath>

namespace bicont::detail {

// Cell weights for  ∫_0^h e^{-r u} g(x_i - u) du  with g linear on the cell
// and z = r h:
//   near(z) * h multiplies g at the near node (u = 0),
//   far(z)  * h multiplies g at the far node  (u = h).
// Both are positive for every real z and near + far = (1 - e^{-z}) / z.

inline double near_weight(double z) noexcept {
    if (std::abs(z) < 1e-3) {
        return 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
    }
    return (z + std::expm1(-z)) / (z * z);
}

inline double far_weight(double z) noexcept {
    if (std::abs(z) < 1e-3) {
        return 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
    }
    return (-std::expm1(-z) - z * std::exp(-z)) / (z * z);
}

}  // namespace bicont::detail

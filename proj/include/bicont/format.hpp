#pragma once

#include <string>

namespace bicont {

/// Formats a double with 17 significant digits ("%.17g"), the precision used
/// for every CSV artifact.
std::string format_real(double x);

}  // namespace bicont

#pragma once

#include "json.hpp"

#include "bicont/generation.hpp"

namespace bicont {

/// {check_name, parameters, passed, tolerance, witnesses:[{input_id, lambda,
/// n, lhs, rhs}], notes, sub_reports}. n is null for checks without a
/// seminorm index.
nlohmann::json to_json(const CheckReport& report);

}  // namespace bicont

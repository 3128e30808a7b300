#pragma once

#include <cmath>

#include "json.hpp"
#include "tbadilog/rational.hpp"
#include "tbadilog/tba.hpp"

namespace tbadilog::detail {

/// Conservative absolute accuracy of c and solution coordinates from the default solver.
inline constexpr double kSolverAccuracy = 1e-12;

/// Real numbers go out with their absolute accuracy attached.
inline nlohmann::json real_json(double value, double abs_error)
{
    nlohmann::json j;
    j["value"] = std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
    j["abs_error"] = abs_error;
    return j;
}

inline nlohmann::json matrix_json(const RationalSymmetricMatrix& m)
{
    return {
        {"a", m.a_infinite ? std::string("inf") : to_string(m.a)},
        {"b", to_string(m.b)},
        {"d", m.d_infinite ? std::string("inf") : to_string(m.d)},
    };
}

}  // namespace tbadilog::detail

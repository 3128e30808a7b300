#include "tbadilog/dilog.hpp"

namespace tbadilog {

double rogers_L(double x)
{
    detail::require_unit(x);
    return rogers_L_generic<double>(x);
}

double check_reflection(double x)
{
    detail::require_unit(x);
    return std::abs(rogers_L(x) + rogers_L(1.0 - x) - 1.0);
}

double check_five_term(double x, double y)
{
    detail::require_unit(x);
    detail::require_unit(y);
    const double xy = x * y;
    if (xy == 1.0) throw std::domain_error("five-term relation undefined at x*y = 1");
    const double lhs = rogers_L(x) + rogers_L(y);
    const double rhs = rogers_L(xy) + rogers_L(x * (1.0 - y) / (1.0 - xy)) + rogers_L(y * (1.0 - x) / (1.0 - xy));
    return std::abs(lhs - rhs);
}

double check_duplication(double x)
{
    detail::require_unit(x);
    return std::abs(0.5 * rogers_L(x * x) - rogers_L(x) + rogers_L(x / (1.0 + x)));
}

}  // namespace tbadilog

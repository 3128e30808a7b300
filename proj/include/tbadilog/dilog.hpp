#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/constants/constants.hpp>

namespace tbadilog {

/// Default residual tolerance for the functional-equation checks.
inline constexpr double kDefaultResidualTolerance = 1e-12;

namespace detail {

inline void require_unit(double x)
{
    if (!std::isfinite(x) || x < 0.0 || x > 1.0)
        throw std::domain_error("Rogers dilogarithm argument outside [0,1]");
}

/// Sum_{n>=1} x^n / n^2 + ln(x) ln(1-x) / 2 for 0 < x <= 1/2.
/// Terms are accumulated smallest first.
template <class Real>
Real rogers_half_interval(const Real& x)
{
    using std::log;
    const Real eps = std::numeric_limits<Real>::epsilon() / 16;
    std::vector<Real> terms;
    Real power = x;
    for (unsigned n = 1;; ++n) {
        Real term = power / (Real(n) * Real(n));
        terms.push_back(term);
        if (term < eps * terms.front()) break;
        power *= x;
    }
    Real sum = 0;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) sum += *it;
    return sum + log(x) * log(Real(1) - x) / 2;
}

}  // namespace detail

/// Normalized Rogers dilogarithm on [0,1], L(0)=0, L(1)=1.
///
/// For x > 1/2 the reflection L(x) = 1 - L(1-x) is applied so the series is
/// only ever summed on (0, 1/2]. Generic over the floating type so the same
/// routine serves the binary64 path and multiprecision verification.
template <class Real>
Real rogers_L_generic(const Real& x)
{
    if (x < 0 || x > 1) throw std::domain_error("Rogers dilogarithm argument outside [0,1]");
    if (x == 0) return Real(0);
    if (x == 1) return Real(1);
    const Real norm = Real(6) / boost::math::constants::pi_sqr<Real>();
    if (x <= Real(1) / 2) return norm * detail::rogers_half_interval(x);
    return Real(1) - norm * detail::rogers_half_interval(Real(1 - x));
}

/// Binary64 Rogers dilogarithm. Throws std::domain_error outside [0,1] or for NaN.
double rogers_L(double x);

/// |L(x) + L(1-x) - 1|
double check_reflection(double x);

/// Residual of the five-term relation; requires x*y != 1.
double check_five_term(double x, double y);

/// Residual of Abel's duplication formula |L(x^2)/2 - L(x) + L(x/(1+x))|.
double check_duplication(double x);

}  // namespace tbadilog

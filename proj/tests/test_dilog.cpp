#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tbadilog/dilog.hpp"

using namespace tbadilog;

namespace {

using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;

// Plain series at 200 digits; reflection for x > 1/2.
double oracle_L(double xd)
{
    if (xd == 0) return 0;
    if (xd == 1) return 1;
    const Big x(xd);
    auto half = [](const Big& t) {
        Big sum = 0, power = t;
        for (int n = 1; n < 2000; ++n) {
            sum += power / (Big(n) * n);
            power *= t;
        }
        return sum + log(t) * log(1 - t) / 2;
    };
    const Big pi = boost::math::constants::pi<Big>();
    const Big norm = 6 / (pi * pi);
    if (x <= Big(0.5)) return static_cast<double>(norm * half(x));
    return static_cast<double>(1 - norm * half(1 - x));
}

const double kRho = (std::sqrt(5.0) - 1) / 2;

}  // namespace

TEST_CASE("special values")
{
    CHECK(rogers_L(0.0) == 0.0);
    CHECK(rogers_L(1.0) == 1.0);
    CHECK(std::abs(rogers_L(0.5) - 0.5) <= 1e-15);
    CHECK(std::abs(rogers_L(kRho) - 0.6) <= 1e-13);
    CHECK(std::abs(rogers_L(1 - kRho) - 0.4) <= 1e-13);
}

TEST_CASE("value at 0.3 against 500-term direct summation")
{
    double sum = 0;
    double power = 0.3;
    for (int n = 1; n <= 500; ++n) {
        sum += power / (double(n) * n);
        power *= 0.3;
    }
    const double expected = 6 / (M_PI * M_PI) * (sum + 0.5 * std::log(0.3) * std::log(0.7));
    CHECK(std::abs(rogers_L(0.3) - expected) <= 1e-15);
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(rogers_L(-1e-300), std::domain_error);
    CHECK_THROWS_AS(rogers_L(1.0000001), std::domain_error);
    CHECK_THROWS_AS(rogers_L(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(rogers_L(INFINITY), std::domain_error);
    CHECK_THROWS_AS(check_five_term(1.0, 1.0), std::domain_error);
}

TEST_CASE("matches 200-digit oracle on a grid and is monotone")
{
    double prev = -1;
    double worst = 0;
    for (int i = 0; i <= 400; ++i) {
        const double x = i / 400.0;
        const double v = rogers_L(x);
        worst = std::max(worst, std::abs(v - oracle_L(x)));
        CHECK(v > prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(worst <= 5e-15);
    // Points straddling the reflection switch and near the ends.
    for (double x : {0.5 - 1e-9, 0.5 + 1e-9, 1e-12, 1 - 1e-12, 1e-300}) CHECK(std::abs(rogers_L(x) - oracle_L(x)) <= 5e-15);
}

TEST_CASE("reflection examples")
{
    CHECK(check_reflection(0.5) <= 1e-14);
    CHECK(check_reflection(0.123) <= 1e-13);
    CHECK(check_reflection(1.0) == 0.0);
    CHECK(check_reflection(0.0) == 0.0);
}

TEST_CASE("five-term examples")
{
    CHECK(check_five_term(0.0, 0.37) == 0.0);
    CHECK(check_five_term(0.3, 0.7) <= 1e-12);
    CHECK(check_five_term(kRho, kRho) <= 1e-12);
}

TEST_CASE("duplication examples")
{
    const double r = 1 / std::sqrt(2.0);
    CHECK(check_duplication(r) <= 1e-13);
    CHECK(std::abs(rogers_L(r) - rogers_L(std::sqrt(2.0) - 1) - 0.25) <= 1e-13);
    CHECK(check_duplication(0.0) == 0.0);
    CHECK(check_duplication(0.4) <= 1e-13);
}

TEST_CASE("functional equations on random points")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        worst = std::max({worst, check_reflection(x), check_five_term(x, y), check_duplication(x)});
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("multiprecision path agrees with the oracle")
{
    using Mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>>;
    const Mp x = Mp(3) / 10;
    const Mp v = rogers_L_generic(x);
    CHECK(std::abs(static_cast<double>(v) - oracle_L(0.3)) <= 1e-16);
    const Mp rho = (boost::multiprecision::sqrt(Mp(5)) - 1) / 2;
    CHECK(boost::multiprecision::abs(rogers_L_generic(rho) - Mp(3) / 5) < Mp(1e-45));
}

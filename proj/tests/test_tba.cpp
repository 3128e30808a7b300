#include "doctest.h"

#include <cmath>
#include <random>

#include "tbadilog/dilog.hpp"
#include "tbadilog/tba.hpp"

using namespace tbadilog;

namespace {

const double kRho = (std::sqrt(5.0) - 1) / 2;

RationalSymmetricMatrix mat(const char* a, const char* b, const char* d)
{
    return {parse_fraction(a), parse_fraction(b), parse_fraction(d)};
}

// Damped fixed-point iteration of the system, independent of the reduced scan.
bool damped_iteration(const RealSymmetricMatrix& m, double x, double y, TbaPoint& out)
{
    double omega = 0.5;
    for (int it = 0; it < 200000; ++it) {
        const double fx = std::pow(1 - x, 2 * m.a) * std::pow(1 - y, 2 * m.b);
        const double fy = std::pow(1 - x, 2 * m.b) * std::pow(1 - y, 2 * m.d);
        const double nx = (1 - omega) * x + omega * std::clamp(fx, 0.0, 1.0);
        const double ny = (1 - omega) * y + omega * std::clamp(fy, 0.0, 1.0);
        const double step = std::max(std::abs(nx - x), std::abs(ny - y));
        x = nx;
        y = ny;
        if (step < 1e-15) {
            out = {x, y};
            return tba_residual(m, x, y) < 1e-11;
        }
        if (it % 20000 == 19999) omega *= 0.5;
    }
    return false;
}

}  // namespace

TEST_CASE("kappa examples")
{
    CHECK(kappa(0.0) == 1.0);
    CHECK(std::abs(kappa(0.5) - 0.5) <= 1e-15);
    CHECK(std::abs(kappa(1.0) - (3 - std::sqrt(5.0)) / 2) <= 1e-15);
    CHECK(std::abs(kappa(0.25) - kRho) <= 1e-15);
    CHECK_THROWS_AS(kappa(-0.1), std::domain_error);
}

TEST_CASE("delta examples")
{
    CHECK(std::abs(delta_fn(1.0) - 0.4) <= 1e-13);
    CHECK(std::abs(delta_fn(0.5) - 0.5) <= 1e-13);
    CHECK(std::abs(delta_fn(0.25) - 0.6) <= 1e-13);
    CHECK(delta_fn(0.0) == 1.0);
}

TEST_CASE("kappa self-consistency and monotonicity")
{
    double prev = 2;
    for (int i = 0; i <= 1000; ++i) {
        const double t = 10.0 * i / 1000;
        const double k = kappa(t);
        CHECK(std::abs(k - std::pow(1 - k, 2 * t)) <= 1e-12);
        CHECK(k < prev);
        prev = k;
    }
}

TEST_CASE("rank-one solutions")
{
    auto s = solve_r1(Rational(1));
    CHECK(std::abs(s.x - (1 - kRho)) <= 1e-15);
    CHECK(std::abs(c_of(s) - 0.4) <= 1e-12);
    CHECK(s.multiplicity == 1);
    s = solve_r1_infinite();
    CHECK(s.x == 0.0);
    CHECK(c_of(s) == 0.0);
    s = solve_r1(Rational(0));
    CHECK(s.x == 1.0);
    CHECK(c_of(s) == 1.0);
    CHECK_THROWS_AS(solve_r1(Rational(-1, 2)), RangeError);
}

TEST_CASE("reduced equation")
{
    const auto a27 = mat("2", "1", "1");
    const double lambda = 2 * std::cos(M_PI / 7);
    const double y = 1 / (lambda * lambda);
    CHECK(std::abs(reduced_f(a27, y) - 1) <= 1e-10);
    CHECK(reduced_f(a27, 1e-6) < 1);
    // At y = kappa(d) the first term equals 1, so f exceeds 1.
    const auto m = mat("3/2", "1/3", "2/3");
    CHECK(reduced_f(m, kappa(2.0 / 3)) > 1);
    CHECK_THROWS_AS(reduced_f(mat("1", "0", "1"), 0.5), std::domain_error);
    CHECK_THROWS_AS(reduced_f(a27, 0.0), std::domain_error);
    CHECK_THROWS_AS(reduced_f(a27, 1.0), std::domain_error);
}

TEST_CASE("closed-form solutions")
{
    auto s = solve_r2(mat("2", "3/2", "3/2"));
    CHECK(std::abs(s.x - (3 - std::sqrt(5.0)) / 4) <= 1e-10);
    CHECK(std::abs(s.y - (std::sqrt(5.0) - 2)) <= 1e-10);
    CHECK(s.multiplicity == 1);

    s = solve_r2(mat("1", "-1/2", "1"));
    CHECK(std::abs(s.x + s.y - 1) <= 1e-10);

    const double delta = 0.5 * (std::sqrt(4 * kRho + 5) - 1);
    s = solve_r2(mat("5/4", "1", "1"));
    CHECK(std::abs(s.x - (1 - delta * delta)) <= 1e-10);
    CHECK(std::abs(s.y - 1 / ((1 + delta) * (1 + delta))) <= 1e-10);

    for (const char* sv : {"1/3", "2/3", "3/2"}) {
        const Rational sr = parse_fraction(sv);
        const Rational t(3, 4);
        s = solve_r2(RationalSymmetricMatrix(sr, t - sr, sr));
        CHECK(std::abs(s.x - kappa(0.75)) <= 1e-10);
        CHECK(std::abs(s.y - kappa(0.75)) <= 1e-10);
    }
}

TEST_CASE("c values of the discrete matrices")
{
    CHECK(std::abs(c_of(mat("2", "1", "1")) - 4.0 / 7) <= 1e-10);
    CHECK(std::abs(c_of(mat("1", "1/2", "3/4")) - 5.0 / 7) <= 1e-10);
    CHECK(std::abs(c_of(mat("4/9", "1/6", "0")) - 6.0 / 5) <= 1e-10);
}

TEST_CASE("decoupled and frozen systems")
{
    const Rational vals[] = {Rational(1), Rational(1, 2), Rational(1, 4), Rational(0)};
    for (const auto& a : vals)
        for (const auto& d : vals) {
            const auto s = solve_r2(RationalSymmetricMatrix(a, 0, d));
            CHECK(std::abs(c_of(s) - (delta_fn(a) + delta_fn(d))) <= 1e-13);
        }
    RationalSymmetricMatrix frozen(0, Rational(1, 2), Rational(1, 2));
    frozen.a_infinite = true;
    const auto s = solve_r2(frozen);
    CHECK(s.x == 0.0);
    CHECK(std::abs(c_of(s) - 0.5) <= 1e-13);
}

TEST_CASE("b = 0 with d = 1/(4a) gives c = 1")
{
    for (const char* a : {"1/3", "1", "7/2", "10"}) {
        const Rational ar = parse_fraction(a);
        CHECK(std::abs(c_of(RationalSymmetricMatrix(ar, 0, 1 / (4 * ar))) - 1) <= 1e-10);
    }
}

TEST_CASE("boundary solutions")
{
    // d = 0, 0 < b < 1/2: interior regular solution plus the corner (0,1).
    auto s = solve_r2(mat("1/4", "1/4", "0"));
    CHECK(s.boundary_flag);
    CHECK_FALSE(s.principal_is_boundary);
    CHECK(s.x > 0);
    CHECK(s.y < 1);
    // a = 0, b = d = 1/2 has only the corner (1,0).
    s = solve_r2(mat("0", "1/2", "1/2"));
    CHECK(s.principal_is_boundary);
    CHECK(s.x == 1.0);
    CHECK(s.y == 0.0);
    CHECK(c_of(s) == 1.0);
    CHECK_FALSE(solve_r2(mat("2", "1", "1")).boundary_flag);
}

TEST_CASE("range violations")
{
    CHECK_THROWS_AS(solve_r2(mat("1", "-2", "1")), RangeError);
    CHECK_THROWS_AS(solve_r2(mat("-1", "0", "1")), RangeError);
    SolveOptions relaxed;
    relaxed.require_range = false;
    CHECK_NOTHROW(solve_r2(mat("2/7", "-5/14", "4/7"), relaxed));
}

TEST_CASE("Au family relation c = 1 - L((1-x)^2)/2")
{
    for (const char* a : {"0", "1/3", "1/2", "1", "2", "5", "9/4"}) {
        const auto m = RationalSymmetricMatrix(parse_fraction(a), Rational(1, 2), Rational(1, 2));
        const auto s = solve_r2(m);
        const double c = c_of(s);
        CHECK(std::abs(c - 1 + 0.5 * rogers_L((1 - s.x) * (1 - s.x))) <= 1e-10);
    }
}

TEST_CASE("symmetric matrices: x = y and c = 2 delta(a+b)")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(0, 24);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 60; ++i) {
        const Rational a(num(rng), 6);
        const Rational b(num(rng) - 12, 6);
        if (b <= -a) continue;
        const RationalSymmetricMatrix m(a, b, a);
        const auto s = solve_r2(m);
        if (s.multiplicity != 1 || s.boundary_flag) continue;
        ++checked;
        CHECK(std::abs(s.x - s.y) <= 1e-10);
        CHECK(std::abs(c_of(s) - 2 * delta_fn(a + b)) <= 1e-10);
    }
    CHECK(checked >= 30);
}

TEST_CASE("damped fixed-point oracle finds only reported solutions")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int matrices = 0;
    int converged_matrices = 0;
    while (matrices < 200) {
        RealSymmetricMatrix m;
        m.a = 4 * u(rng);
        m.d = 4 * u(rng);
        m.b = -std::min(m.a, m.d) + (4 + std::min(m.a, m.d)) * u(rng);
        ++matrices;
        const auto s = solve_r2(m);
        std::vector<TbaPoint> known = s.interior;
        known.insert(known.end(), s.boundary.begin(), s.boundary.end());
        bool any = false;
        for (int start = 0; start < 20; ++start) {
            TbaPoint p;
            if (!damped_iteration(m, u(rng), u(rng), p)) continue;
            any = true;
            double best = 1;
            for (const auto& k : known) best = std::min(best, std::max(std::abs(k.x - p.x), std::abs(k.y - p.y)));
            CHECK_MESSAGE(best <= 1e-8, "a=" << m.a << " b=" << m.b << " d=" << m.d << " x=" << p.x << " y=" << p.y);
        }
        if (any) ++converged_matrices;
    }
    CHECK(converged_matrices >= 180);
}

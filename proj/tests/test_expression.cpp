#include "doctest.h"

#include <cmath>

#include "tbadilog/expression.hpp"

using namespace tbadilog;

TEST_CASE("arithmetic and precedence")
{
    CHECK(Expression("1 + 2*3").value() == 7);
    CHECK(Expression("(1 + 2)*3").value() == 9);
    CHECK(Expression("1/2 - 1/4").value() == 0.25);
    CHECK(Expression("-2^2").value() == -4);
    CHECK(Expression("2^0").value() == 1);
    CHECK(Expression("8/2/2").value() == 2);
    CHECK(Expression("3 - 2 - 1").value() == 0);
    CHECK(Expression("sqrt(2)*sqrt(2)").value() == doctest::Approx(2).epsilon(1e-15));
}

TEST_CASE("constants")
{
    const double rho = (std::sqrt(5.0) - 1) / 2;
    CHECK(std::abs(Expression("rho").value() - rho) <= 1e-16);
    CHECK(std::abs(Expression("rho^2 + rho").value() - 1) <= 1e-15);
    const Expression e("1/(lambda^2 - 1)^2 + alpha");
    CHECK(e.constants() == std::vector<std::string>{"lambda", "alpha"});
    CHECK(e.text() == "1/(lambda^2 - 1)^2 + alpha");
}

TEST_CASE("high precision evaluation")
{
    const auto v = Expression("rho^2 + rho").evaluate<HighPrecision>();
    CHECK(abs(v - 1) < HighPrecision(1e-48));
    const auto s = Expression("sqrt(2)^2").evaluate<HighPrecision>();
    CHECK(abs(s - 2) < HighPrecision(1e-48));
    const auto d = Expression("delta^4 + 2*delta^3 - delta - 1").evaluate<HighPrecision>();
    CHECK(abs(d) < HighPrecision(1e-48));
}

TEST_CASE("errors")
{
    CHECK_THROWS_AS(Expression("omega + 1"), ParseError);
    CHECK_THROWS_AS(Expression("1 +"), ParseError);
    CHECK_THROWS_AS(Expression("(1"), ParseError);
    CHECK_THROWS_AS(Expression("2^x"), ParseError);
    CHECK_THROWS_AS(Expression("sqrt 2"), ParseError);
    CHECK_THROWS_AS(Expression("1 2"), ParseError);
    CHECK_THROWS_AS(Expression(""), ParseError);
    CHECK_THROWS_AS(Expression("1/(1-1)").value(), std::domain_error);
    CHECK_THROWS_AS(Expression("sqrt(0 - 1)").value(), std::domain_error);
}

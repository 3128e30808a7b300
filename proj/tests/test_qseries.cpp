#include "doctest.h"

#include <cmath>

#include "tbadilog/qseries.hpp"

using namespace tbadilog;

namespace {

const std::string kForms = std::string(TBADILOG_DATA_DIR) + "/forms.cat";

const std::vector<FermionicForm>& forms()
{
    static const auto f = load_forms(kForms);
    return f;
}

const FermionicForm& form(std::string_view name)
{
    for (const auto& f : forms())
        if (f.name == name) return f;
    FAIL("missing form " << name);
    throw 0;
}

FermionicForm rank1(Rational a, Rational b)
{
    FermionicForm f;
    f.name = "t";
    f.rank = 1;
    f.A = RationalSymmetricMatrix(a, 0, 0);
    f.B = {b};
    return f;
}

FermionicForm rank2(Rational a, Rational b, Rational d, Rational b1, Rational b2)
{
    FermionicForm f;
    f.name = "t";
    f.A = RationalSymmetricMatrix(a, b, d);
    f.B = {b1, b2};
    return f;
}

// Truncated power series helpers, kept naive on purpose.
using Series = std::vector<long long>;

Series product_inverse(int n, auto&& keep)
{
    Series s(n + 1, 0);
    s[0] = 1;
    for (int k = 1; k <= n; ++k)
        if (keep(k))
            for (int j = k; j <= n; ++j) s[j] += s[j - k];
    return s;
}

Series divide_by_factor(Series s, int k)
{
    for (std::size_t j = k; j < s.size(); ++j) s[j] += s[j - k];
    return s;
}

long long partitions_brute(int n, int max_part)
{
    if (n == 0) return 1;
    long long total = 0;
    for (int p = std::min(n, max_part); p >= 1; --p) total += partitions_brute(n - p, p);
    return total;
}

}  // namespace

TEST_CASE("rank one sums match the product sides")
{
    const int N = 60;
    const auto g = expand(rank1(1, 1), Rational(N));
    const auto ref = product_inverse(N, [](int k) { return k % 5 == 2 || k % 5 == 3; });
    CHECK(g.denom == 1);
    for (int n = 0; n <= N; ++n) CHECK_MESSAGE(g.coefficient(n) == ref[n], n);
    CHECK(g.coefficient(1) == 0);
    CHECK(g.coefficient(6) == 2);

    const auto h = expand(rank1(1, 0), Rational(N));
    const auto ref0 = product_inverse(N, [](int k) { return k % 5 == 1 || k % 5 == 4; });
    for (int n = 0; n <= N; ++n) CHECK_MESSAGE(h.coefficient(n) == ref0[n], n);
}

TEST_CASE("rank two sum against a double loop")
{
    const int N = 40;
    const auto s = expand(rank2(1, Rational(1, 2), 1, 0, 1), Rational(N));
    Series ref(N + 1, 0);
    for (int m1 = 0; m1 * m1 <= N; ++m1)
        for (int m2 = 0; m1 * m1 + m1 * m2 + m2 * m2 + m2 <= N; ++m2) {
            Series t(N + 1, 0);
            t[m1 * m1 + m1 * m2 + m2 * m2 + m2] = 1;
            for (int k = 1; k <= m1; ++k) t = divide_by_factor(t, k);
            for (int k = 1; k <= m2; ++k) t = divide_by_factor(t, k);
            for (int n = 0; n <= N; ++n) ref[n] += t[n];
        }
    for (int n = 0; n <= N; ++n) CHECK_MESSAGE(s.coefficient(n) == ref[n], n);
}

TEST_CASE("negative off-diagonal coupling")
{
    // m.A.m = (m1 - m2)^2 + m1 m2 for a = d = 1, b = -1/2.
    const int N = 30;
    const auto s = expand(rank2(1, Rational(-1, 2), 1, 1, 1), Rational(N));
    Series ref(N + 1, 0);
    for (int m1 = 0; m1 <= N; ++m1)
        for (int m2 = 0; m2 <= N; ++m2) {
            const int e = m1 * m1 - m1 * m2 + m2 * m2 + m1 + m2;
            if (e > N) continue;
            Series t(N + 1, 0);
            t[e] = 1;
            for (int k = 1; k <= m1; ++k) t = divide_by_factor(t, k);
            for (int k = 1; k <= m2; ++k) t = divide_by_factor(t, k);
            for (int n = 0; n <= N; ++n) ref[n] += t[n];
        }
    for (int n = 0; n <= N; ++n) CHECK_MESSAGE(s.coefficient(n) == ref[n], n);
}

TEST_CASE("restricted pieces add up to the full sum")
{
    for (const char* base : {"chi37", "chi56"}) {
        const auto& q0 = form(std::string(base) + "_q0");
        const auto& q1 = form(std::string(base) + "_q1");
        FermionicForm full = q0;
        full.restrictions.clear();
        const Rational order(12);
        const auto a = expand(q0, order), b = expand(q1, order), c = expand(full, order);
        REQUIRE(a.denom == c.denom);
        for (const auto& [k, v] : c.coeffs) CHECK_MESSAGE(a.coefficient(k) + b.coefficient(k) == v, base << " " << k);
        for (const auto& [k, v] : a.coeffs) CHECK(c.coefficient(k) != 0);
    }
}

TEST_CASE("divergent and degenerate forms")
{
    CHECK_THROWS_AS(expand(rank1(0, 0), Rational(5)), DivergentSeriesError);
    CHECK_THROWS_AS(expand(rank1(0, -1), Rational(5)), DivergentSeriesError);
    CHECK_THROWS_AS(expand(rank2(1, 0, 0, 0, 0), Rational(5)), DivergentSeriesError);
    CHECK_THROWS_AS(expand(rank2(1, -1, 1, 0, 0), Rational(5)), DivergentSeriesError);
    CHECK_THROWS_AS(expand(rank1(1, 0), Rational(0)), std::invalid_argument);
    // With A = 0, B = 1 every term is q^m/(q)_m, a convergent sum.
    const auto p = expand(rank1(0, 1), Rational(20));
    for (int n = 0; n <= 20; ++n) CHECK(p.coefficient(n) == partitions_brute(n, n));
    CHECK(expand(rank2(1, -1, 1, 1, 1), Rational(8)).coefficient(0) == 1);
}

TEST_CASE("inverse Pochhammer counts partitions")
{
    for (int m = 0; m <= 12; ++m) {
        const auto p = pochhammer_inverse(m, 25);
        for (int n = 0; n <= 25; ++n) CHECK(p[n] == partitions_brute(n, m));
    }
    CHECK_THROWS_AS(pochhammer_inverse(-1, 4), std::invalid_argument);
    CHECK_THROWS_AS(pochhammer_inverse(1000, 1000), std::overflow_error);
}

TEST_CASE("fractional exponents")
{
    const auto& f = form("chi34");
    const auto s = expand(f, Rational(10));
    CHECK(s.denom == 16);
    CHECK(s.lead_shift == 1);
    CHECK(s.coefficient(Rational(1, 16)) == 1);
    CHECK(s.coefficient(Rational(1, 16) + 1) == 1);
    CHECK(s.coefficient(Rational(1, 17)) == 0);
    for (const auto& [k, v] : s.coeffs) CHECK(k <= 10 * s.denom);
}

TEST_CASE("direct evaluation agrees with the expansion")
{
    for (const auto& f : forms()) {
        const auto s = expand(f, Rational(80));
        for (double q : {0.2, 0.3}) {
            const auto r = eval_at_auto(f, q);
            CHECK(r.converged);
            CHECK_MESSAGE(std::abs(r.value - s.evaluate(q)) <= 1e-12 * std::abs(r.value), f.name << " q=" << q);
        }
    }
    CHECK_THROWS_AS(eval_at(form("chi25"), 1.0, 10), std::invalid_argument);
    const auto crude = eval_at(form("chi45"), 0.9, 2);
    CHECK_FALSE(crude.converged);
}

TEST_CASE("effective central charge from the asymptotics")
{
    for (const auto& f : forms()) {
        const auto e = estimate_ceff(f);
        const double c = tba_c(f);
        CHECK_MESSAGE(std::abs(e.c - c) <= 0.02, f.name << " estimate " << e.c << " tba " << c);
        CHECK_MESSAGE(e.well_behaved, f.name << ": " << e.diagnostics);
    }
    CHECK_THROWS_AS(estimate_ceff(form("chi25"), {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("coefficients are non-negative")
{
    for (const auto& f : forms()) {
        const auto s = expand(f, Rational(30));
        for (const auto& [k, v] : s.coeffs) {
            CHECK(v > 0);
            CHECK(k - s.lead_shift >= 0);
        }
    }
}

TEST_CASE("catalog parsing and export")
{
    const auto& fs = forms();
    REQUIRE(fs.size() == 9);
    CHECK(parse_forms(serialize_forms(fs)) == fs);
    CHECK(serialize_forms(parse_forms(serialize_forms(fs))) == serialize_forms(fs));
    CHECK(form("chi37_q1").restrictions == std::vector<Congruence>{{2, 2, 1}});
    CHECK_THROWS_AS(parse_forms("form x\n  matrix 1 2\n  linear 0\n  lead 0\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_forms("form x\n  matrix 1\n  linear 0\n  lead 0\n"), ParseError);
    CHECK_THROWS_AS(parse_forms("form x\n  matrix 1\n  linear 0\n  restrict 2 2 0\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_forms("form x\n  matrix 1\n  linear 0 0\nend\n"), ParseError);

    const auto s = expand(rank1(1, 1), Rational(6));
    CHECK(s.export_text() == "0/1 1\n2/1 1\n3/1 1\n4/1 1\n5/1 1\n6/1 2\n");
}

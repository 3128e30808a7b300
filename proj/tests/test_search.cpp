#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "json.hpp"
#include "tbadilog/search.hpp"

using namespace tbadilog;

namespace {

RationalSymmetricMatrix mat(const char* a, const char* b, const char* d)
{
    return RationalSymmetricMatrix(parse_fraction(a), parse_fraction(b), parse_fraction(d));
}

SearchConfig config(long long den, long long num, DiagonalMode diag = DiagonalMode::positive)
{
    SearchConfig c;
    c.max_denominator = den;
    c.max_numerator = num;
    c.diagonal = diag;
    return c;
}

const SearchReport& wide()
{
    static const SearchReport r = search(config(18, 8, DiagonalMode::allow_zero));
    return r;
}

const Candidate* find(const std::vector<Candidate>& cs, const RationalSymmetricMatrix& m)
{
    for (const auto& c : cs)
        if (c.A == m) return &c;
    return nullptr;
}

void expect_hit(const std::vector<Candidate>& cs, const RationalSymmetricMatrix& m, Rational c)
{
    const Candidate* hit = find(cs, m);
    REQUIRE_MESSAGE(hit != nullptr, m.to_string());
    CHECK_MESSAGE(hit->matched_value() == c, m.to_string());
    CHECK(std::abs(hit->c - to_double(c)) <= 1e-10);
}

Candidate candidate_for(const RationalSymmetricMatrix& m)
{
    SolveOptions relaxed;
    relaxed.require_range = false;
    Candidate c;
    c.A = m;
    c.solution = solve_r2(m, relaxed);
    c.c = c_of(c.solution);
    c.matches = recognize(c.c);
    return c;
}

}  // namespace

TEST_CASE("config validation")
{
    auto c = config(4, 8);
    CHECK_NOTHROW(c.validate());
    c.tolerance = 1e-12;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(0, 8);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(4, 8);
    c.entry_min = Rational(2);
    c.entry_max = Rational(1);
    CHECK_THROWS_AS(search(c), std::invalid_argument);
}

TEST_CASE("quarter-integer matrices")
{
    const auto cs = run_search(config(4, 8));
    expect_hit(cs, mat("1", "1/2", "3/4"), Rational(5, 7));
    expect_hit(cs, mat("5/4", "1", "1"), Rational(3, 5));
}

TEST_CASE("half-integer matrices")
{
    const auto cs = run_search(config(2, 8));
    expect_hit(cs, mat("4", "5/2", "2"), Rational(2, 5));
    expect_hit(cs, mat("2", "3/2", "3/2"), Rational(1, 2));
    expect_hit(cs, mat("4", "3/2", "1"), Rational(1, 2));
    expect_hit(cs, mat("2", "1", "1"), Rational(4, 7));
}

TEST_CASE("denominators up to 18 with zero diagonal")
{
    const auto& cs = wide().candidates;
    expect_hit(cs, mat("1/4", "1/4", "0"), Rational(8, 7));
    expect_hit(cs, mat("4/9", "1/6", "0"), Rational(6, 5));
    expect_hit(cs, mat("4/3", "1/6", "1/3"), Rational(6, 7));
    // The one-parameter family with b = d = 1/2 at a = 0, 1/2, 1, 2 (a = 0 appears swapped).
    expect_hit(cs, mat("1/2", "1/2", "0"), Rational(1));
    expect_hit(cs, mat("1/2", "1/2", "1/2"), Rational(4, 5));
    expect_hit(cs, mat("1", "1/2", "1/2"), Rational(3, 4));
    expect_hit(cs, mat("2", "1/2", "1/2"), Rational(7, 10));
    CHECK(wide().failures.empty());
}

TEST_CASE("equal diagonal hits have a + b in {0, 1/4, 1/2, 1}")
{
    auto cfg = config(4, 8);
    cfg.equal_diagonal = true;
    cfg.require_uniqueness = true;
    const auto rep = search(cfg);
    REQUIRE(rep.candidates.size() > 10);
    for (const auto& c : rep.candidates) {
        CHECK(c.A.a == c.A.d);
        const Rational s = c.A.a + c.A.b;
        CHECK_MESSAGE((s == 0 || s == Rational(1, 4) || s == Rational(1, 2) || s == 1), c.A.to_string());
    }
    for (const auto& r : rep.non_unique) CHECK(find(rep.candidates, r.A) == nullptr);
}

TEST_CASE("candidates are canonical, ordered and sound")
{
    const auto& cs = wide().candidates;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        CHECK(cs[i].A.a >= cs[i].A.d);
        if (i > 0) {
            const auto& p = cs[i - 1];
            const bool ordered = p.denominator < cs[i].denominator ||
                                 (p.denominator == cs[i].denominator &&
                                  std::tie(p.A.a, p.A.d, p.A.b) < std::tie(cs[i].A.a, cs[i].A.d, cs[i].A.b));
            CHECK(ordered);
        }
    }
    // Fresh solve at a denser scan.
    SolveOptions fine;
    fine.grid_points = 400000;
    int checked = 0;
    for (std::size_t i = 0; i < cs.size(); i += 3) {
        const double c = c_of(cs[i].A, fine);
        CHECK_MESSAGE(std::abs(c - to_double(cs[i].matched_value())) <= 1e-9, cs[i].A.to_string());
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("thread count does not change the report")
{
    auto one = config(2, 8, DiagonalMode::allow_zero);
    one.threads = 1;
    auto four = one;
    four.threads = 4;
    const auto a = search(one), b = search(four);
    CHECK(format_text(a) == format_text(b));
    CHECK(format_json(a) == format_json(b));
}

TEST_CASE("non-unique matrices are listed with every solution")
{
    auto cfg = config(4, 8);
    cfg.equal_diagonal = true;
    const auto rep = search(cfg);
    REQUIRE_FALSE(rep.non_unique.empty());
    for (const auto& r : rep.non_unique) {
        CHECK(r.solutions.size() >= 2);
        CHECK(r.principal >= 0);
        CHECK(r.principal < static_cast<int>(r.solutions.size()));
    }
    CHECK(format_text(rep).find("[non-unique]") != std::string::npos);
}

TEST_CASE("dual pairs collapse onto c <= 1")
{
    const auto a25 = mat("4", "5/2", "2");
    const auto pair = dedupe_by_duality({candidate_for(a25), candidate_for(canonical(dual(a25)))});
    REQUIRE(pair.size() == 1);
    CHECK(pair[0].A == a25);
    REQUIRE(pair[0].dual);
    CHECK(std::abs(pair[0].dual->c - 1.6) <= 1e-9);

    const auto single = dedupe_by_duality({candidate_for(a25)});
    REQUIRE(single.size() == 1);
    CHECK_FALSE(single[0].dual);

    const auto a67 = mat("4/3", "1/6", "1/3");
    const auto p67 = dedupe_by_duality({candidate_for(canonical(dual(a67))), candidate_for(a67)});
    REQUIRE(p67.size() == 1);
    CHECK(p67[0].A == a67);
    REQUIRE(p67[0].dual);
    CHECK(std::abs(p67[0].dual->c - 8.0 / 7) <= 1e-9);
    const auto& labels = p67[0].dual->labels;
    CHECK(std::find(labels.begin(), labels.end(), "Z_5") != labels.end());
}

TEST_CASE("reports")
{
    const auto rep = search(config(1, 3));
    const auto text = format_text(rep);
    CHECK(text.find("[candidates]") != std::string::npos);
    CHECK(text.find("A = (2 1; 1 1)  c = 0.571428571429 = 4/7") != std::string::npos);
    const auto j = nlohmann::json::parse(format_json(rep));
    REQUIRE(j["candidates"].is_array());
    bool found = false;
    for (const auto& c : j["candidates"]) {
        CHECK(c["c"].contains("abs_error"));
        if (c["matrix"]["a"] == "2" && c["matrix"]["b"] == "1" && c["matrix"]["d"] == "1") {
            found = true;
            CHECK(c["matched"] == "4/7");
        }
    }
    CHECK(found);
    CHECK(j["stats"]["enumerated"].get<long long>() == rep.stats.enumerated);
}

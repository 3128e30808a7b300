#include "tbadilog/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tbadilog/dilog.hpp"

namespace tbadilog {

namespace {

void require_finite(const RationalSymmetricMatrix& m, const char* what)
{
    if (m.a_infinite || m.d_infinite) throw std::invalid_argument(std::string(what) + " needs finite entries");
}

}  // namespace

bool check_range(const RationalSymmetricMatrix& m)
{
    if (m.a_infinite && m.d_infinite) return true;
    if (m.a_infinite) return m.d >= 0;
    if (m.d_infinite) return m.a >= 0;
    return m.a >= 0 && m.d >= 0 && m.b >= -std::min(m.a, m.d);
}

UniquenessReport uniqueness_report(const RationalSymmetricMatrix& m)
{
    require_finite(m, "uniqueness test");
    UniquenessReport r;
    const Rational det = m.det();
    r.det = to_double(det);
    const double a = to_double(m.a);
    const double d = to_double(m.d);
    const double t1 = d * (1 / kappa(a) - 1);
    const double t2 = a * (1 / kappa(d) - 1);
    r.threshold = -0.5 * std::max(t1, t2);
    r.guaranteed = det >= 0 || r.det >= r.threshold + kKappaMargin;
    if (m.b > 0) {
        if (m.d <= Rational(1, 2))
            r.weak_small_d = det >= -m.a * m.d;
        else
            r.weak_large_d = det >= -2 * m.a * m.d / (2 * m.d + 1);
    }
    return r;
}

bool uniqueness_guarantee(const RationalSymmetricMatrix& m)
{
    return uniqueness_report(m).guaranteed;
}

RationalSymmetricMatrix dual(const RationalSymmetricMatrix& m)
{
    if (m.a_infinite || m.d_infinite) throw std::domain_error("dual needs finite entries");
    const Rational det = m.det();
    if (det == 0) throw std::domain_error("matrix " + m.to_string() + " is singular");
    const Rational s = 4 * det;
    return {m.d / s, -m.b / s, m.a / s};
}

std::string to_string(Relation r)
{
    switch (r) {
    case Relation::greater: return "greater";
    case Relation::equal: return "equal";
    case Relation::less: return "less";
    }
    return "less";
}

ClassificationResult classify_vs_one(const RationalSymmetricMatrix& m)
{
    require_finite(m, "classification");
    ClassificationResult r;
    const Rational half(1, 2);
    r.ad = m.a * m.d;
    r.gap = (half - m.b) * (half - m.b);
    r.b_vs_half = boost::multiprecision::sign(Rational(m.b - half));
    r.ad_vs_gap = boost::multiprecision::sign(Rational(r.ad - r.gap));
    const std::string cmp_b = r.b_vs_half < 0 ? "b < 1/2" : (r.b_vs_half == 0 ? "b = 1/2" : "b > 1/2");
    const std::string cmp_ad = std::string("ad ") + (r.ad_vs_gap < 0 ? "<" : (r.ad_vs_gap == 0 ? "=" : ">")) +
                               " (1/2 - b)^2 = " + to_string(r.gap);
    if (r.b_vs_half < 0 && r.ad_vs_gap < 0)
        r.relation = Relation::greater;
    else if (r.b_vs_half <= 0 && r.ad_vs_gap == 0)
        r.relation = Relation::equal;
    else
        r.relation = Relation::less;
    r.reason = cmp_b + ", " + cmp_ad;
    return r;
}

RealSymmetricMatrix FamilyC1::real() const
{
    RealSymmetricMatrix m;
    m.a = to_double(a);
    m.d = to_double(d);
    m.b = exact_b ? to_double(*exact_b) : b;
    return m;
}

std::optional<RationalSymmetricMatrix> FamilyC1::exact() const
{
    if (!exact_b) return std::nullopt;
    return RationalSymmetricMatrix(a, *exact_b, d);
}

std::string FamilyC1::b_expression() const
{
    if (exact_b) return to_string(*exact_b);
    return "1/2 - sqrt(" + to_string(a * d) + ")";
}

FamilyC1 family_c1(const Rational& a, const Rational& d)
{
    if (a < 0 || d < 0) throw std::invalid_argument("family needs a, d >= 0");
    FamilyC1 f;
    f.a = a;
    f.d = d;
    Rational root;
    if (rational_sqrt(a * d, root)) {
        f.exact_b = Rational(1, 2) - root;
        f.b = to_double(*f.exact_b);
    } else {
        f.b = 0.5 - std::sqrt(to_double(a * d));
    }
    return f;
}

std::string to_string(BoundsCase c)
{
    switch (c) {
    case BoundsCase::d_le_b: return "d<=b";
    case BoundsCase::d_ge_b_positive: return "d>=b>0";
    case BoundsCase::b_negative: return "b<0";
    }
    return "d<=b";
}

BoundsResult bounds_on_c(const RationalSymmetricMatrix& m)
{
    require_finite(m, "bounds");
    if (!check_range(m)) throw std::invalid_argument("bounds need a matrix in range");
    if (!(m.a >= m.d && m.d > 0)) throw std::invalid_argument("bounds need a >= d > 0");
    BoundsResult r;
    if (m.d <= m.b) {
        r.case_tag = BoundsCase::d_le_b;
        r.lower = delta_fn(m.b + m.d) + rogers_L(std::pow(kappa(m.d), to_double((m.a + m.b) / m.d)));
        r.upper = delta_fn(m.a + m.b) + delta_fn(m.d);
        return r;
    }
    const Rational det = m.det();
    const Rational ratio = det / (m.a - m.b);
    if (m.b >= 0) {
        r.case_tag = BoundsCase::d_ge_b_positive;
        const double exponent = to_double((m.a * m.a - m.b * m.b) / det);
        r.lower = delta_fn(m.b + m.d) + rogers_L(std::pow(kappa(ratio), exponent));
        r.upper = delta_fn(m.a + m.b) + delta_fn(ratio);
    } else {
        r.case_tag = BoundsCase::b_negative;
        r.lower = delta_fn(m.a + m.b) + delta_fn(ratio);
        r.upper = 2 * delta_fn(m.b + m.d);
    }
    return r;
}

RationalSymmetricMatrix canonical(const RationalSymmetricMatrix& m)
{
    if (m.d_infinite && !m.a_infinite) return m.swapped();
    if (m.a_infinite || m.d_infinite) return m;
    return m.a >= m.d ? m : m.swapped();
}

}  // namespace tbadilog

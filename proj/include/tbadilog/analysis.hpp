#pragma once

#include <optional>
#include <string>

#include "tbadilog/rational.hpp"
#include "tbadilog/tba.hpp"

namespace tbadilog {

/// Margin applied to comparisons that involve kappa.
inline constexpr double kKappaMargin = 1e-12;

/// a,d >= 0 and b >= -min(a,d), exactly.
bool check_range(const RationalSymmetricMatrix& m);

struct UniquenessReport {
    bool guaranteed = false;
    double det = 0;
    /// -1/2 max{ d(1/kappa(a) - 1), a(1/kappa(d) - 1) }
    double threshold = 0;
    /// Weaker explicit tests; empty when their premises (b > 0 and the d condition) fail.
    std::optional<bool> weak_small_d;  // d <= 1/2: D >= -ad
    std::optional<bool> weak_large_d;  // d > 1/2: D >= -2ad/(2d+1)
};

UniquenessReport uniqueness_report(const RationalSymmetricMatrix& m);
/// Sufficient condition for a unique solution on [0,1]. Requires check_range.
bool uniqueness_guarantee(const RationalSymmetricMatrix& m);

/// (1/4) A^{-1}. Throws std::domain_error when det A = 0 or an entry is infinite.
RationalSymmetricMatrix dual(const RationalSymmetricMatrix& m);

enum class Relation { greater, equal, less };

std::string to_string(Relation r);

struct ClassificationResult {
    Relation relation = Relation::less;
    int b_vs_half = 0;   // sign of b - 1/2
    int ad_vs_gap = 0;   // sign of ad - (1/2 - b)^2
    Rational ad;
    Rational gap;        // (1/2 - b)^2
    std::string reason;
};

/// Position of c[A] relative to 1 from the entries alone.
ClassificationResult classify_vs_one(const RationalSymmetricMatrix& m);

/// Member of the family with b = 1/2 - sqrt(ad).
struct FamilyC1 {
    Rational a;
    Rational d;
    double b = 0;
    /// Set when ad is the square of a rational.
    std::optional<Rational> exact_b;

    RealSymmetricMatrix real() const;
    std::optional<RationalSymmetricMatrix> exact() const;
    std::string b_expression() const;
};

FamilyC1 family_c1(const Rational& a, const Rational& d);

enum class BoundsCase { d_le_b, d_ge_b_positive, b_negative };

std::string to_string(BoundsCase c);

struct BoundsResult {
    double lower = 0;
    double upper = 0;
    BoundsCase case_tag = BoundsCase::d_le_b;
};

/// Lower and upper bounds on c[A]. Requires check_range and a >= d > 0; throws
/// std::invalid_argument otherwise. b = 0 uses the 0 < b <= d formulas, which stay finite.
BoundsResult bounds_on_c(const RationalSymmetricMatrix& m);

/// Swap so that a >= d.
RationalSymmetricMatrix canonical(const RationalSymmetricMatrix& m);

}  // namespace tbadilog

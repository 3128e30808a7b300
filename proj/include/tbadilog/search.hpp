#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tbadilog/analysis.hpp"
#include "tbadilog/charges.hpp"
#include "tbadilog/rational.hpp"
#include "tbadilog/tba.hpp"

namespace tbadilog {

enum class DiagonalMode {
    positive,    // a, d > 0
    allow_zero,  // a >= d >= 0
    zero_only,   // d = 0
};

std::string to_string(DiagonalMode m);

/// Matrices are (1/q) (p r; r s) with integers 1 <= q <= max_denominator,
/// 0 <= p, s <= max_numerator and |r| <= max_numerator, taken once in lowest terms.
struct SearchConfig {
    long long max_denominator = 4;
    long long max_numerator = 8;
    /// Optional bounds applied to every entry after scaling.
    std::optional<Rational> entry_min;
    std::optional<Rational> entry_max;
    DiagonalMode diagonal = DiagonalMode::positive;
    /// Only a = d.
    bool equal_diagonal = false;
    /// Recognition tolerance on c.
    double tolerance = 1e-9;
    /// tol is replaced by `tolerance`. Rational labels are informational only.
    RecognizeOptions recognition{1e-9, 200, 60, 120};
    /// Drop matrices whose scan finds several interior solutions from the main list.
    bool require_uniqueness = false;
    /// Scan density for the first solve; suspects are re-solved at four times the solver default.
    int grid_points = SolveOptions{}.grid_points;
    /// 0 picks the hardware concurrency.
    unsigned threads = 0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Solver residuals sit near 1e-14; matching tolerances below this are rejected.
inline constexpr double kSolverResidualFloor = 1e-10;
/// Recognition residual above which a hit is re-solved before it is accepted.
inline constexpr double kSuspectThreshold = 1e-9;

struct PropFlags {
    Relation classification = Relation::less;
    bool uniqueness_guaranteed = false;
    std::optional<BoundsResult> bounds;
};

struct DualNote {
    RationalSymmetricMatrix matrix;
    double c = 0;
    std::vector<std::string> labels;
};

/// Admissible hit: c matches a minimal-model or parafermion value.
struct Candidate {
    RationalSymmetricMatrix A;
    /// Common denominator of the entries.
    BigInt denominator;
    double c = 0;
    ChargeMatch matches;
    TbaSolution solution;
    PropFlags flags;
    /// Recognized only above kSuspectThreshold on the first solve.
    bool suspect = false;
    std::optional<DualNote> dual;

    /// Value of the best match (minimal, then parafermion).
    Rational matched_value() const;
};

struct SolutionRecord {
    double x = 0;
    double y = 0;
    double c = 0;
    std::vector<std::string> labels;
};

struct NonUniqueRecord {
    RationalSymmetricMatrix A;
    int principal = 0;
    std::vector<SolutionRecord> solutions;
};

struct SearchFailure {
    RationalSymmetricMatrix A;
    std::string message;
};

struct SearchStats {
    long long enumerated = 0;
    long long out_of_range = 0;
    long long pruned_by_bounds = 0;
    long long solved = 0;
    long long boundary_only = 0;
    long long unrecognized = 0;
    long long suspects = 0;
    long long rejected_suspects = 0;
    long long non_unique = 0;
};

struct SearchReport {
    SearchConfig config;
    std::vector<Candidate> candidates;
    std::vector<NonUniqueRecord> non_unique;
    std::vector<SearchFailure> failures;
    SearchStats stats;
};

/// Enumerates in (denominator, a, d, b) order; output does not depend on the thread count.
SearchReport search(const SearchConfig& cfg);
std::vector<Candidate> run_search(const SearchConfig& cfg);

/// Pairs (A, canonical dual of A) both present collapse onto the member with c <= 1.
std::vector<Candidate> dedupe_by_duality(const std::vector<Candidate>& cands);

std::string format_text(const SearchReport& report);
std::string format_json(const SearchReport& report);

}  // namespace tbadilog

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbadilog/expression.hpp"
#include "tbadilog/rational.hpp"
#include "tbadilog/tba.hpp"

namespace tbadilog {

struct IdentityTerm {
    Rational coefficient;
    Expression argument;
};

enum class ProofStatus { proven, unproven };

/// sum coefficient * L(argument) = target
struct IdentityEntry {
    std::string name;
    std::vector<IdentityTerm> terms;
    Rational target;
    std::optional<RationalSymmetricMatrix> matrix;
    ProofStatus status = ProofStatus::proven;
    std::string source;
};

/// Catalog text format, one record per identity:
///
///   identity NAME
///     term COEFF EXPRESSION
///     ...
///     target P/Q
///     matrix A B D        (optional)
///     status proven|unproven
///     source FREE TEXT
///   end
///
/// Records are separated by one blank line. Lines starting with '#' and extra
/// blank lines are ignored on input. serialize_catalog writes the canonical form,
/// so parsing and serializing a canonical file reproduces it byte for byte.
std::vector<IdentityEntry> parse_catalog(std::string_view text);
std::string serialize_catalog(const std::vector<IdentityEntry>& entries);

std::vector<IdentityEntry> load_catalog(const std::filesystem::path& path);
/// $TBADILOG_DATA_DIR/identities.cat if set, else the installed data directory.
std::filesystem::path default_catalog_path();
std::filesystem::path default_data_dir();

const IdentityEntry* find_entry(const std::vector<IdentityEntry>& entries, std::string_view name);

enum class Verdict { verified, plausible, failed };

std::string to_string(Verdict v);
std::string to_string(ProofStatus s);

/// verified <= 1e-12 < plausible <= 1e-8 < failed
Verdict classify_residual(double residual);

struct VerifyOptions {
    /// Residual below which refinement stops.
    double precision = 1e-12;
    /// Evaluate in 50-digit arithmetic instead of binary64.
    bool high_precision = false;
};

struct VerifyResult {
    double value = 0;
    double residual = 0;
    Verdict verdict = Verdict::failed;
    bool high_precision = false;
};

/// Throws std::domain_error when an argument falls outside [0,1].
VerifyResult verify_entry(const IdentityEntry& entry, const VerifyOptions& opts = {});
double verify(const IdentityEntry& entry, double precision = 1e-12);

struct CrossCheckResult {
    double c = 0;
    double c_residual = 0;
    /// Max coordinate distance between (x, y) and the identity arguments, best order.
    double coordinate_residual = 0;
    bool swapped = false;
};

/// Compares the TBA solution for `m` with the two arguments of `entry`.
/// Integer coefficients k > 0 count as k copies of the argument.
/// Throws std::invalid_argument when the entry does not expand to two arguments.
CrossCheckResult cross_check_tba(const IdentityEntry& entry, const RationalSymmetricMatrix& m,
                                 const SolveOptions& opts = {});

}  // namespace tbadilog

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tbadilog/rational.hpp"
#include "tbadilog/tba.hpp"

namespace tbadilog {

/// Summation variable `variable` (1-based) restricted to residue mod modulus.
struct Congruence {
    int variable = 1;
    int modulus = 2;
    int residue = 0;

    friend bool operator==(const Congruence&, const Congruence&) = default;
};

/// q^lead * sum_m q^{m.A.m + B.m} / prod (q)_{m_i}, rank 1 or 2.
/// For rank 1 only A.a and B[0] are used.
struct FermionicForm {
    std::string name;
    int rank = 2;
    RationalSymmetricMatrix A;
    std::vector<Rational> B;
    Rational lead;
    std::vector<Congruence> restrictions;

    /// Matrix used for the TBA comparison.
    std::string matrix_string() const;
    bool admits(long long m1, long long m2) const;

    friend bool operator==(const FermionicForm&, const FermionicForm&) = default;
};

/// The sum diverges: infinitely many terms below the requested order.
class DivergentSeriesError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// sum_k coeffs[k] q^{k/denom}, exact up to q^order.
struct QSeries {
    long long denom = 1;
    std::map<long long, long long> coeffs;
    Rational order;
    /// denom * lead; k - lead_shift is the exponent of the bare sum.
    long long lead_shift = 0;

    long long coefficient(long long k) const;
    /// Coefficient of q^e for a rational exponent; 0 when absent.
    long long coefficient(const Rational& e) const;
    double evaluate(double q) const;
    /// "k/L coefficient" per line, ascending k, zero coefficients omitted.
    std::string export_text() const;
};

/// Coefficients of 1/(q)_m = prod_{k=1..m} 1/(1-q^k) up to q^n. Throws std::overflow_error.
std::vector<long long> pochhammer_inverse(long long m, long long n);

/// Throws DivergentSeriesError when the exponents do not grow in every direction,
/// std::invalid_argument for order <= 0 or a malformed form, std::overflow_error
/// when a coefficient leaves int64.
QSeries expand(const FermionicForm& form, const Rational& order);

struct EvalResult {
    double value = 0;
    /// Estimate of the omitted terms beyond the cutoff.
    double tail = 0;
    bool converged = false;
    long long cutoff = 0;
};

/// Direct sum over m_i <= cutoff in ascending row-major order.
EvalResult eval_at(const FermionicForm& form, double q, long long cutoff);
/// Doubles the cutoff from 64 until the tail is below 1e-14 of the value.
EvalResult eval_at_auto(const FermionicForm& form, double q, long long max_cutoff = 1 << 14);

struct CeffEstimate {
    double c = 0;
    double slope = 0;
    std::vector<double> eps;
    std::vector<double> samples;  // s(eps) = 6 eps / pi^2 ln chi(e^-eps)
    /// False when the samples are not monotone in eps or a sum did not converge.
    bool well_behaved = true;
    std::string diagnostics;
};

/// Linear least squares of s(eps) against eps, extrapolated to eps = 0.
/// Requires at least three eps values in (0.02, 0.3).
CeffEstimate estimate_ceff(const FermionicForm& form, const std::vector<double>& eps = {0.20, 0.12, 0.07, 0.04});

/// Catalog of forms, same record layout as the identity catalog:
///
///   form NAME
///     matrix A | A B D
///     linear B1 [B2]
///     lead P/Q
///     restrict VARIABLE MODULUS RESIDUE   (optional, repeatable)
///   end
std::vector<FermionicForm> parse_forms(std::string_view text);
std::string serialize_forms(const std::vector<FermionicForm>& forms);
std::vector<FermionicForm> load_forms(const std::filesystem::path& path);

/// c of the TBA system attached to the form's matrix.
double tba_c(const FermionicForm& form);

}  // namespace tbadilog

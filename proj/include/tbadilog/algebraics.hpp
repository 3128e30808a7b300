#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbadilog/rational.hpp"

namespace tbadilog {

/// Polynomial with integer coefficients, constant term first.
class IntegerPolynomial {
public:
    IntegerPolynomial() = default;
    explicit IntegerPolynomial(std::vector<BigInt> coefficients);
    IntegerPolynomial(std::initializer_list<long long> coefficients);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<BigInt>& coefficients() const { return coeffs_; }
    const BigInt& leading() const { return coeffs_.back(); }

    Rational operator()(const Rational& x) const;
    double operator()(double x) const;

    IntegerPolynomial derivative() const;
    /// p / gcd(p, p'), made primitive with positive leading coefficient.
    IntegerPolynomial squarefree_part() const;

    std::string to_string(std::string_view var = "x") const;

    friend bool operator==(const IntegerPolynomial&, const IntegerPolynomial&) = default;

private:
    std::vector<BigInt> coeffs_;
};

/// Exact Horner evaluation.
Rational eval_poly_at(const IntegerPolynomial& p, const Rational& x);

struct RationalInterval {
    Rational lo;
    Rational hi;

    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
};

/// A real algebraic number: the unique root of `poly` inside [lo, hi].
/// The polynomial is squarefree and nonzero at both endpoints.
class AlgebraicNumber {
public:
    AlgebraicNumber(IntegerPolynomial poly, Rational lo, Rational hi);

    const IntegerPolynomial& poly() const { return poly_; }
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    /// Midpoint of an interval refined to width <= eps.
    Rational approximate(const Rational& eps) const;
    double to_double() const;

private:
    IntegerPolynomial poly_;
    Rational lo_;
    Rational hi_;
};

/// Distinct real roots in increasing order, each with a disjoint isolating interval.
/// Throws std::invalid_argument for constant polynomials.
std::vector<AlgebraicNumber> isolate_real_roots(const IntegerPolynomial& p);

/// Number of distinct real roots in (lo, hi] by Sturm's theorem.
int sturm_count(const IntegerPolynomial& p, const Rational& lo, const Rational& hi);

/// Number of distinct real roots on the whole line.
int sturm_count_all(const IntegerPolynomial& p);

/// Bisection on sign until the width is at most eps.
RationalInterval refine(const AlgebraicNumber& a, const Rational& eps);
RationalInterval refine(const AlgebraicNumber& a, double eps);

/// Named constants (rho, lambda, alpha, beta, gamma, delta, u_plus, u_minus, mu, nu).
struct NamedConstant {
    std::string name;
    std::string description;
    AlgebraicNumber value;
};

const std::vector<NamedConstant>& constant_catalog();

/// nullptr when the name is unknown.
const AlgebraicNumber* find_constant(std::string_view name);

}  // namespace tbadilog

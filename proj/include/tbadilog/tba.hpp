#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbadilog/rational.hpp"

namespace tbadilog {

/// Symmetric 2x2 coupling matrix (a b; b d) with exact rational entries.
/// A diagonal entry flagged infinite freezes its variable at zero.
struct RationalSymmetricMatrix {
    Rational a;
    Rational b;
    Rational d;
    bool a_infinite = false;
    bool d_infinite = false;

    RationalSymmetricMatrix() = default;
    RationalSymmetricMatrix(Rational a_, Rational b_, Rational d_) : a(std::move(a_)), b(std::move(b_)), d(std::move(d_)) {}

    Rational det() const { return a * d - b * b; }
    RationalSymmetricMatrix scaled(const Rational& s) const;
    /// Exchange (a, x) with (d, y).
    RationalSymmetricMatrix swapped() const;
    std::string to_string() const;

    friend bool operator==(const RationalSymmetricMatrix&, const RationalSymmetricMatrix&) = default;
};

/// The same system with real entries, used for families with irrational couplings.
struct RealSymmetricMatrix {
    double a = 0;
    double b = 0;
    double d = 0;
    bool a_infinite = false;
    bool d_infinite = false;

    double det() const { return a * d - b * b; }
};

RealSymmetricMatrix to_real(const RationalSymmetricMatrix& m);

/// Thrown when the coupling matrix violates a solver precondition.
class RangeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when the scan brackets no solution.
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TbaPoint {
    double x = 0;
    double y = 0;
};

struct TbaSolution {
    int rank = 2;
    double x = 0;
    double y = 0;  // unused when rank == 1
    double residual = 0;
    /// Distinct interior solutions found by the scan (1 for decoupled or rank-1 systems).
    int multiplicity = 1;
    /// True when a corner solution (x,y) in {(0,1),(1,0)} exists.
    bool boundary_flag = false;
    /// True when no interior solution exists and the reported point is a corner.
    bool principal_is_boundary = false;
    std::vector<TbaPoint> interior;
    std::vector<TbaPoint> boundary;
};

struct SolveOptions {
    /// Uniform scan points on (0,1); logit-spaced tail points are added near both ends.
    int grid_points = 100000;
    /// When false only a,d >= 0 is required (used for dual matrices and irrational families).
    bool require_range = true;
};

/// Unique xi in [0,1] with xi = (1-xi)^(2t).
double kappa(double t);
double kappa(const Rational& t);

/// L(kappa(t)).
double delta_fn(double t);
double delta_fn(const Rational& t);

/// Rank-one system x = (1-x)^(2a).
TbaSolution solve_r1(const Rational& a);
TbaSolution solve_r1_infinite();

/// Left-hand side of the reduced equation f(y) = 1 obtained by eliminating x.
/// Requires b != 0 and 0 < y < 1.
double reduced_f(const RealSymmetricMatrix& m, double y);
double reduced_f(const RationalSymmetricMatrix& m, double y);

/// Max residual of both equations at (x, y).
double tba_residual(const RealSymmetricMatrix& m, double x, double y);

TbaSolution solve_r2(const RealSymmetricMatrix& m, const SolveOptions& opts = {});
TbaSolution solve_r2(const RationalSymmetricMatrix& m, const SolveOptions& opts = {});

/// Sum of L over the principal solution.
double c_of(const TbaSolution& s);
double c_of(const RationalSymmetricMatrix& m, const SolveOptions& opts = {});
double c_of_r1(const Rational& a);

}  // namespace tbadilog

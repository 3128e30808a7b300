#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tbadilog/rational.hpp"

namespace tbadilog {

/// c = 1 - 6/(st), reported with 2 <= s <= |t| and the sign carried on t.
struct MinimalMatch {
    long long s = 0;
    long long t = 0;
    /// Other coprime factorisations of the same product.
    std::vector<std::pair<long long, long long>> alternatives;
    double residual = 0;

    long long st() const { return s * t; }
    Rational value() const { return 1 - Rational(6) / Rational(st()); }
};

/// c = 2(n-1)/(n+2).
struct ParafermionMatch {
    long long n = 0;
    double residual = 0;

    Rational value() const { return Rational(2 * (n - 1), n + 2); }
};

struct RationalMatch {
    Rational value;
    double residual = 0;
};

struct ChargeMatch {
    std::optional<MinimalMatch> minimal;
    std::optional<ParafermionMatch> parafermion;
    std::optional<RationalMatch> rational;
    /// Smallest residual among the present matches; NaN when empty.
    double residual = 0;

    bool empty() const { return !minimal && !parafermion && !rational; }
    /// Labels ordered rational, minimal, parafermion, e.g. {"4/7", "M(2,7)"}.
    std::vector<std::string> labels() const;
};

struct RecognizeOptions {
    double tol = 1e-9;
    long long max_st = 200;
    long long max_n = 60;
    long long max_den = 10000;
};

/// Throws std::invalid_argument when tol <= 0 or c lies outside [0,2] by more than tol.
ChargeMatch recognize(double c, const RecognizeOptions& opts = {});

/// Best rational p/q with q <= max_den among the continued-fraction convergents of x
/// that lies within tol, if any.
std::optional<Rational> convergent_within(double x, double tol, long long max_den);

std::string minimal_label(long long s, long long t);
std::string parafermion_label(long long n);

}  // namespace tbadilog

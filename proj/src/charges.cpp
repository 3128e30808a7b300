#include "tbadilog/charges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tbadilog {

namespace {

// Coprime factorisations st = s * |t| with 2 <= s < |t|, largest s first.
std::vector<std::pair<long long, long long>> factorisations(long long st)
{
    std::vector<std::pair<long long, long long>> out;
    const long long n = std::llabs(st);
    for (long long s = static_cast<long long>(std::sqrt(static_cast<double>(n))) + 1; s >= 2; --s) {
        if (s * s >= n || n % s != 0) continue;
        const long long t = n / s;
        if (std::gcd(s, t) != 1) continue;
        out.emplace_back(s, st < 0 ? -t : t);
    }
    return out;
}

std::optional<MinimalMatch> match_minimal(double c, double tol, long long max_st)
{
    // 1 - 6/(st) = c  <=>  st = 6/(1-c). Scan by increasing |st| so the smallest wins.
    for (long long m = 6; m <= max_st; ++m) {
        for (long long st : {m, -m}) {
            const double v = 1.0 - 6.0 / static_cast<double>(st);
            const double r = std::abs(v - c);
            if (r > tol) continue;
            auto fs = factorisations(st);
            if (fs.empty()) continue;
            MinimalMatch mm;
            mm.s = fs.front().first;
            mm.t = fs.front().second;
            mm.alternatives.assign(fs.begin() + 1, fs.end());
            mm.residual = r;
            return mm;
        }
    }
    return std::nullopt;
}

std::optional<ParafermionMatch> match_parafermion(double c, double tol, long long max_n)
{
    if (c >= 2) return std::nullopt;
    const double guess = (2 * c + 2) / (2 - c);
    std::optional<ParafermionMatch> best;
    const long long centre = static_cast<long long>(std::llround(std::min(guess, static_cast<double>(max_n))));
    for (long long n = centre - 2; n <= centre + 2; ++n) {
        if (n < 2 || n > max_n) continue;
        const double v = 2.0 * static_cast<double>(n - 1) / static_cast<double>(n + 2);
        const double r = std::abs(v - c);
        if (r <= tol && (!best || r < best->residual)) best = ParafermionMatch{n, r};
    }
    return best;
}

}  // namespace

std::optional<Rational> convergent_within(double x, double tol, long long max_den)
{
    if (!std::isfinite(x)) return std::nullopt;
    // Convergents h/k via the standard recurrence.
    BigInt h_prev = 1, h = static_cast<long long>(std::floor(x));
    BigInt k_prev = 0, k = 1;
    double rem = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        if (k > max_den) break;
        const Rational r(h, k);
        if (std::abs(to_double(r) - x) <= tol) return r;
        if (rem == 0) break;
        const double inv = 1.0 / rem;
        const double a = std::floor(inv);
        rem = inv - a;
        const BigInt ai = static_cast<long long>(a);
        BigInt h_next = ai * h + h_prev;
        BigInt k_next = ai * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    return std::nullopt;
}

std::string minimal_label(long long s, long long t)
{
    return "M(" + std::to_string(s) + "," + std::to_string(t) + ")";
}

std::string parafermion_label(long long n)
{
    return "Z_" + std::to_string(n);
}

std::vector<std::string> ChargeMatch::labels() const
{
    std::vector<std::string> out;
    if (rational) out.push_back(to_string(rational->value));
    if (minimal) out.push_back(minimal_label(minimal->s, minimal->t));
    if (parafermion) out.push_back(parafermion_label(parafermion->n));
    return out;
}

ChargeMatch recognize(double c, const RecognizeOptions& opts)
{
    if (!(opts.tol > 0)) throw std::invalid_argument("tolerance must be positive");
    if (!(c >= -opts.tol && c <= 2 + opts.tol)) throw std::invalid_argument("c outside [0,2]");
    ChargeMatch m;
    m.minimal = match_minimal(c, opts.tol, opts.max_st);
    m.parafermion = match_parafermion(c, opts.tol, opts.max_n);
    if (auto r = convergent_within(c, opts.tol, opts.max_den)) m.rational = RationalMatch{*r, std::abs(to_double(*r) - c)};
    m.residual = std::numeric_limits<double>::infinity();
    if (m.minimal) m.residual = std::min(m.residual, m.minimal->residual);
    if (m.parafermion) m.residual = std::min(m.residual, m.parafermion->residual);
    if (m.rational) m.residual = std::min(m.residual, m.rational->residual);
    if (m.empty()) m.residual = std::numeric_limits<double>::quiet_NaN();
    return m;
}

}  // namespace tbadilog

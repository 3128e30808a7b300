#include "tbadilog/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "tbadilog/analysis.hpp"

namespace tbadilog {

namespace {

using ll = long long;

ll checked_add(ll a, ll b)
{
    ll r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("q-series coefficient exceeds 64 bits");
    return r;
}

ll to_ll(const Rational& r, const char* what)
{
    if (boost::multiprecision::denominator(r) != 1) throw std::logic_error(std::string(what) + " is not integral");
    const BigInt& n = boost::multiprecision::numerator(r);
    if (n > std::numeric_limits<ll>::max() / 4 || n < std::numeric_limits<ll>::min() / 4)
        throw std::overflow_error(std::string(what) + " too large");
    return static_cast<ll>(n);
}

Rational linear(const FermionicForm& f, std::size_t i)
{
    return i < f.B.size() ? f.B[i] : Rational(0);
}

void validate(const FermionicForm& f)
{
    if (f.rank != 1 && f.rank != 2) throw std::invalid_argument("form rank must be 1 or 2");
    if (f.A.a_infinite || f.A.d_infinite) throw std::invalid_argument("form matrix must be finite");
    if (f.B.size() > static_cast<std::size_t>(f.rank)) throw std::invalid_argument("too many linear terms");
    for (const auto& c : f.restrictions) {
        if (c.variable < 1 || c.variable > f.rank) throw std::invalid_argument("restriction on a missing variable");
        if (c.modulus < 1 || c.residue < 0 || c.residue >= c.modulus)
            throw std::invalid_argument("restriction needs 0 <= residue < modulus");
    }
}

// Integer coefficients of L * (a m1^2 + 2b m1 m2 + d m2^2 + B1 m1 + B2 m2).
struct Quadratic {
    ll L = 1;
    ll qa = 0, q2b = 0, qd = 0, qb1 = 0, qb2 = 0;
    ll lead = 0;

    explicit Quadratic(const FermionicForm& f)
    {
        BigInt den = 1;
        const bool r2 = f.rank == 2;
        for (const Rational& r : {f.A.a, r2 ? Rational(2 * f.A.b) : Rational(0), r2 ? f.A.d : Rational(0), linear(f, 0),
                                  r2 ? linear(f, 1) : Rational(0), f.lead})
            den = lcm(den, boost::multiprecision::denominator(r));
        const Rational Lr(den);
        L = to_ll(Lr, "exponent denominator");
        qa = to_ll(Lr * f.A.a, "a");
        qb1 = to_ll(Lr * linear(f, 0), "B1");
        lead = to_ll(Lr * f.lead, "lead");
        if (r2) {
            q2b = to_ll(2 * Lr * f.A.b, "b");
            qd = to_ll(Lr * f.A.d, "d");
            qb2 = to_ll(Lr * linear(f, 1), "B2");
        }
    }

    ll operator()(ll m1, ll m2) const { return qa * m1 * m1 + q2b * m1 * m2 + qd * m2 * m2 + qb1 * m1 + qb2 * m2; }
};

// Minimum of c2 x^2 + c1 x over integers x >= 0 (c2 > 0, or c2 = 0 with c1 >= 0).
double min_on_naturals(double c2, double c1)
{
    if (c2 <= 0) return 0.0;
    const double v = std::max(0.0, -c1 / (2 * c2));
    const double lo = std::floor(v), hi = std::ceil(v);
    return std::min(c2 * lo * lo + c1 * lo, c2 * hi * hi + c1 * hi);
}

// Lower bound for min over m2 >= 0 of the exponent in row m1, convex in m1.
struct RowBound {
    double c2 = 0, c1 = 0, c0 = 0;
    double operator()(double m1) const { return c2 * m1 * m1 + c1 * m1 + c0; }
};

RowBound row_bound(const Quadratic& q, int rank)
{
    RowBound h;
    if (rank == 1) {
        h.c2 = static_cast<double>(q.qa);
        h.c1 = static_cast<double>(q.qb1);
        return h;
    }
    const double a = static_cast<double>(q.qa), b = static_cast<double>(q.q2b) / 2, d = static_cast<double>(q.qd);
    const double b1 = static_cast<double>(q.qb1), b2 = static_cast<double>(q.qb2);
    if (b >= 0) {
        h.c2 = a;
        h.c1 = b1;
        h.c0 = (d == 0) ? 0.0 : min_on_naturals(d, b2);
        return h;
    }
    const double det = a * d - b * b;
    if (det > 0) {
        const double lambda = 0.5 * ((a + d) - std::sqrt((a - d) * (a - d) + 4 * b * b)) * (1 - 1e-12);
        h.c2 = lambda;
        h.c1 = b1;
        h.c0 = min_on_naturals(lambda, b2);
        return h;
    }
    // a = d = -b: the exponent is a (m1-m2)^2 + B1 m1 + B2 m2.
    h.c2 = 0;
    h.c1 = b1 + b2;
    h.c0 = -b2 * b2 / (4 * a) - std::abs(b2);
    return h;
}

}  // namespace

std::string FermionicForm::matrix_string() const
{
    if (rank == 1) return to_string(A.a);
    return A.to_string();
}

bool FermionicForm::admits(long long m1, long long m2) const
{
    for (const auto& c : restrictions) {
        const long long m = c.variable == 1 ? m1 : m2;
        if (m % c.modulus != c.residue) return false;
    }
    return true;
}

long long QSeries::coefficient(long long k) const
{
    const auto it = coeffs.find(k);
    return it == coeffs.end() ? 0 : it->second;
}

long long QSeries::coefficient(const Rational& e) const
{
    const Rational k = e * denom;
    if (boost::multiprecision::denominator(k) != 1) return 0;
    return coefficient(static_cast<long long>(boost::multiprecision::numerator(k)));
}

double QSeries::evaluate(double q) const
{
    // Ascending exponents; summed smallest terms last is fine for q < 1.
    double sum = 0;
    for (const auto& [k, c] : coeffs) sum += static_cast<double>(c) * std::pow(q, static_cast<double>(k) / denom);
    return sum;
}

std::string QSeries::export_text() const
{
    std::ostringstream os;
    for (const auto& [k, c] : coeffs)
        if (c != 0) os << k << '/' << denom << ' ' << c << '\n';
    return os.str();
}

std::vector<long long> pochhammer_inverse(long long m, long long n)
{
    if (m < 0 || n < 0) throw std::invalid_argument("pochhammer_inverse needs m, n >= 0");
    std::vector<ll> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = 1;
    // Multiply by 1/(1-q^k) for k = 1..m; factors with k > n do not contribute.
    for (ll k = 1; k <= std::min(m, n); ++k)
        for (ll j = k; j <= n; ++j) p[j] = checked_add(p[j], p[j - k]);
    return p;
}

QSeries expand(const FermionicForm& form, const Rational& order)
{
    validate(form);
    if (order <= 0) throw std::invalid_argument("order must be positive");
    const Quadratic q(form);
    QSeries s;
    s.denom = q.L;
    s.order = order;
    s.lead_shift = q.lead;
    const Rational top = order * q.L;
    // Largest bare exponent kept, in units of 1/L.
    const ll N = static_cast<ll>(boost::multiprecision::numerator(top) / boost::multiprecision::denominator(top)) -
                 (top < 0 && boost::multiprecision::denominator(top) != 1 ? 1 : 0) - q.lead;
    if (N < 0) return s;
    const ll n_int = N / q.L;

    const RowBound h = row_bound(q, form.rank);
    if (h.c2 <= 0 && h.c1 <= 0) throw DivergentSeriesError("exponents do not grow along m1; the sum diverges");
    const double Nd = static_cast<double>(N) + 0.5;

    std::deque<std::vector<ll>> pinv;  // pinv[m] = 1/(q)_m up to q^n_int
    auto pinv_for = [&](ll m) -> const std::vector<ll>& {
        const ll mm = std::min(m, n_int);
        while (static_cast<ll>(pinv.size()) <= mm) pinv.push_back(pochhammer_inverse(static_cast<ll>(pinv.size()), n_int));
        return pinv[mm];
    };

    std::map<ll, ll> acc;
    ll terms = 0;
    auto add_term = [&](ll m1, ll m2, ll e) {
        if (++terms > 50000000) throw std::overflow_error("expansion needs too many terms");
        const auto& p1 = pinv_for(m1);
        const auto& p2 = pinv_for(m2);
        // Coefficients of 1/((q)_m1 (q)_m2) at integer powers j with e + L j <= N.
        const ll jmax = (N - e) / q.L;
        for (ll j1 = 0; j1 <= jmax; ++j1) {
            if (p1[j1] == 0) continue;
            for (ll j2 = 0; j1 + j2 <= jmax; ++j2) {
                ll prod;
                if (__builtin_mul_overflow(p1[j1], p2[j2], &prod)) throw std::overflow_error("q-series coefficient exceeds 64 bits");
                ll& slot = acc[e + q.L * (j1 + j2)];
                slot = checked_add(slot, prod);
            }
        }
    };

    for (ll m1 = 0;; ++m1) {
        const double hm = h(static_cast<double>(m1));
        if (hm > Nd && h(static_cast<double>(m1 + 1)) >= hm) break;
        if (m1 > 10000000) throw DivergentSeriesError("summation over m1 does not terminate");
        if (form.rank == 1) {
            const ll e = q(m1, 0);
            if (e <= N && form.admits(m1, 0)) add_term(m1, 0, e);
            continue;
        }
        const ll slope0 = q.q2b * m1 + q.qb2;  // derivative of the row in m2 at 0, without the d term
        if (q.qd == 0 && slope0 <= 0) {
            if (q(m1, 0) <= N || slope0 < 0)
                throw DivergentSeriesError("exponents do not grow along m2; the sum diverges");
            continue;
        }
        for (ll m2 = 0;; ++m2) {
            const ll e = q(m1, m2);
            const bool rising = 2 * q.qd * m2 + q.qd + slope0 >= 0;
            if (e > N && rising) break;
            if (m2 > 10000000) throw DivergentSeriesError("summation over m2 does not terminate");
            if (e <= N && form.admits(m1, m2)) {
                if (e < 0 && e + q.lead < -q.L * 1000000) throw DivergentSeriesError("exponent unbounded below");
                add_term(m1, m2, e);
            }
        }
    }
    for (const auto& [e, c] : acc)
        if (c != 0) s.coeffs[e + q.lead] = c;
    return s;
}

EvalResult eval_at(const FermionicForm& form, double q, long long cutoff)
{
    validate(form);
    if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0,1)");
    if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
    const double lq = std::log(q);
    const double a = to_double(form.A.a);
    const double b2 = form.rank == 2 ? 2 * to_double(form.A.b) : 0.0;
    const double d = form.rank == 2 ? to_double(form.A.d) : 0.0;
    const double B1 = to_double(linear(form, 0));
    const double B2 = form.rank == 2 ? to_double(linear(form, 1)) : 0.0;
    auto Q = [&](double m1, double m2) { return a * m1 * m1 + b2 * m1 * m2 + d * m2 * m2 + B1 * m1 + B2 * m2; };

    // lp[m] = ln (q)_m
    std::vector<double> lp(static_cast<std::size_t>(cutoff) + 2, 0.0);
    for (ll m = 1; m <= cutoff + 1; ++m) lp[m] = lp[m - 1] + std::log1p(-std::pow(q, static_cast<double>(m)));
    auto log_term = [&](ll m1, ll m2) {
        return lq * Q(static_cast<double>(m1), static_cast<double>(m2)) - lp[m1] - lp[m2];
    };

    EvalResult r;
    r.cutoff = cutoff;
    double sum = 0;
    double tail = 0;
    bool stalled = false;
    const ll m2max = form.rank == 2 ? cutoff : 0;
    for (ll m1 = 0; m1 <= cutoff; ++m1) {
        for (ll m2 = 0; m2 <= m2max; ++m2) {
            if (!form.admits(m1, m2)) continue;
            const double lt = log_term(m1, m2);
            const double t = std::exp(lt);
            sum += t;
            // Geometric estimate of what lies beyond the boundary, outward in each direction.
            auto outward = [&](ll n1, ll n2, ll step1, ll step2) {
                const double ratio = std::exp(log_term(n1 + step1, n2 + step2) - lt);
                if (ratio < 1)
                    tail += t * ratio / (1 - ratio);
                else if (t > 0)
                    stalled = true;
            };
            if (m1 == cutoff) outward(m1, m2, 1, 0);
            if (form.rank == 2 && m2 == cutoff) outward(m1, m2, 0, 1);
        }
    }
    const double pre = std::pow(q, to_double(form.lead));
    r.value = pre * sum;
    r.tail = stalled ? std::numeric_limits<double>::infinity() : pre * tail;
    r.converged = r.tail <= 1e-14 * std::abs(r.value);
    return r;
}

EvalResult eval_at_auto(const FermionicForm& form, double q, long long max_cutoff)
{
    EvalResult r;
    for (ll c = 64; c <= max_cutoff; c *= 2) {
        r = eval_at(form, q, c);
        if (r.converged) return r;
    }
    return r;
}

CeffEstimate estimate_ceff(const FermionicForm& form, const std::vector<double>& eps)
{
    if (eps.size() < 3) throw std::invalid_argument("estimate_ceff needs at least three eps values");
    for (double e : eps)
        if (!(e > 0.02 && e < 0.3)) throw std::invalid_argument("eps values must lie in (0.02, 0.3)");
    CeffEstimate est;
    est.eps = eps;
    const double pi2 = M_PI * M_PI;
    std::ostringstream diag;
    for (double e : eps) {
        const EvalResult r = eval_at_auto(form, std::exp(-e));
        if (!r.converged) {
            est.well_behaved = false;
            diag << "sum at eps=" << e << " did not converge (tail " << r.tail << "); ";
        }
        est.samples.push_back(6 * e / pi2 * std::log(r.value));
    }
    // Least squares s = c + slope * eps.
    const double n = static_cast<double>(eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        sx += eps[i];
        sy += est.samples[i];
        sxx += eps[i] * eps[i];
        sxy += eps[i] * est.samples[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0) throw std::invalid_argument("eps values must not all coincide");
    est.slope = (n * sxy - sx * sy) / den;
    est.c = (sy - est.slope * sx) / n;

    std::vector<std::size_t> idx(eps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return eps[x] < eps[y]; });
    int dir = 0;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        const double diff = est.samples[idx[i]] - est.samples[idx[i - 1]];
        const int s = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
        if (s != 0 && dir != 0 && s != dir) {
            est.well_behaved = false;
            diag << "samples are not monotone in eps; ";
            break;
        }
        if (s != 0) dir = s;
    }
    est.diagnostics = diag.str();
    return est;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

int parse_small_int(const std::string& w)
{
    const Rational r = parse_fraction(w);
    if (boost::multiprecision::denominator(r) != 1 || r < 0 || r > 1000000) throw ParseError("expected a small integer, got '" + w + "'");
    return static_cast<int>(boost::multiprecision::numerator(r));
}

}  // namespace

std::vector<FermionicForm> parse_forms(std::string_view text)
{
    std::vector<FermionicForm> out;
    std::optional<FermionicForm> cur;
    bool have_matrix = false;
    int lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    auto fail = [&](const std::string& msg) { throw ParseError("forms line " + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto w = split_words(line);
        try {
            if (!cur) {
                if (w[0] != "form" || w.size() != 2) fail("expected 'form NAME'");
                cur.emplace();
                cur->name = w[1];
                have_matrix = false;
            } else if (w[0] == "matrix") {
                if (w.size() == 2) {
                    cur->rank = 1;
                    cur->A = RationalSymmetricMatrix(parse_fraction(w[1]), 0, 0);
                } else if (w.size() == 4) {
                    cur->rank = 2;
                    cur->A = RationalSymmetricMatrix(parse_fraction(w[1]), parse_fraction(w[2]), parse_fraction(w[3]));
                } else {
                    fail("matrix needs one or three fractions");
                }
                have_matrix = true;
            } else if (w[0] == "linear") {
                cur->B.clear();
                for (std::size_t i = 1; i < w.size(); ++i) cur->B.push_back(parse_fraction(w[i]));
            } else if (w[0] == "lead") {
                if (w.size() != 2) fail("lead needs one fraction");
                cur->lead = parse_fraction(w[1]);
            } else if (w[0] == "restrict") {
                if (w.size() != 4) fail("restrict needs VARIABLE MODULUS RESIDUE");
                cur->restrictions.push_back({parse_small_int(w[1]), parse_small_int(w[2]), parse_small_int(w[3])});
            } else if (w[0] == "end") {
                if (!have_matrix) fail("form '" + cur->name + "' has no matrix");
                if (cur->B.size() != static_cast<std::size_t>(cur->rank)) fail("linear term count must match the rank");
                validate(*cur);
                out.push_back(std::move(*cur));
                cur.reset();
            } else {
                fail("unknown field '" + w[0] + "'");
            }
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        } catch (const ParseError& e) {
            if (std::string(e.what()).rfind("forms line", 0) == 0) throw;
            fail(e.what());
        }
    }
    if (cur) throw ParseError("forms: '" + cur->name + "' is missing 'end'");
    return out;
}

std::string serialize_forms(const std::vector<FermionicForm>& forms)
{
    std::ostringstream os;
    bool first = true;
    for (const auto& f : forms) {
        if (!first) os << '\n';
        first = false;
        os << "form " << f.name << '\n';
        if (f.rank == 1)
            os << "  matrix " << to_string(f.A.a) << '\n';
        else
            os << "  matrix " << to_string(f.A.a) << ' ' << to_string(f.A.b) << ' ' << to_string(f.A.d) << '\n';
        os << "  linear";
        for (const auto& b : f.B) os << ' ' << to_string(b);
        os << '\n';
        os << "  lead " << to_string(f.lead) << '\n';
        for (const auto& c : f.restrictions) os << "  restrict " << c.variable << ' ' << c.modulus << ' ' << c.residue << '\n';
        os << "end\n";
    }
    return os.str();
}

std::vector<FermionicForm> load_forms(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open forms file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_forms(ss.str());
}

double tba_c(const FermionicForm& form)
{
    if (form.rank == 1) return c_of_r1(form.A.a);
    return c_of(form.A);
}

}  // namespace tbadilog

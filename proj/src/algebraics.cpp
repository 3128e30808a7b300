#include "tbadilog/algebraics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tbadilog {

namespace {

using RPoly = std::vector<Rational>;

void trim(RPoly& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

RPoly to_rational(const IntegerPolynomial& p)
{
    RPoly r;
    r.reserve(p.coefficients().size());
    for (const auto& c : p.coefficients()) r.emplace_back(c);
    return r;
}

// Quotient and remainder of a / b over Q.
std::pair<RPoly, RPoly> divmod(RPoly a, const RPoly& b)
{
    if (b.empty()) throw std::invalid_argument("polynomial division by zero");
    RPoly q;
    trim(a);
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
    while (!a.empty() && a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        const Rational factor = a.back() / b.back();
        q[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

RPoly derivative(const RPoly& p)
{
    RPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long long>(i));
    trim(d);
    return d;
}

RPoly gcd(RPoly a, RPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

// Primitive integer polynomial with positive leading coefficient.
IntegerPolynomial to_primitive(const RPoly& p)
{
    BigInt den = 1;
    for (const auto& c : p) den = lcm(den, boost::multiprecision::denominator(c));
    std::vector<BigInt> ints;
    BigInt content = 0;
    for (const auto& c : p) {
        BigInt v = boost::multiprecision::numerator(c) * (den / boost::multiprecision::denominator(c));
        content = boost::multiprecision::gcd(content, v);
        ints.push_back(v);
    }
    if (content != 0) {
        if (ints.back() < 0) content = -content;
        for (auto& v : ints) v /= content;
    }
    return IntegerPolynomial(std::move(ints));
}

int sign_at(const RPoly& p, const Rational& x)
{
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
}

std::vector<RPoly> sturm_chain(const IntegerPolynomial& p)
{
    std::vector<RPoly> chain;
    chain.push_back(to_rational(p));
    chain.push_back(derivative(chain.back()));
    while (!chain.back().empty()) {
        auto r = divmod(chain[chain.size() - 2], chain.back()).second;
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    if (chain.back().empty()) chain.pop_back();
    return chain;
}

int variations(const std::vector<int>& signs)
{
    int count = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

int variations_at(const std::vector<RPoly>& chain, const Rational& x)
{
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& q : chain) signs.push_back(sign_at(q, x));
    return variations(signs);
}

int variations_at_infinity(const std::vector<RPoly>& chain, bool positive)
{
    std::vector<int> signs;
    for (const auto& q : chain) {
        int s = q.back() > 0 ? 1 : -1;
        if (!positive && (q.size() - 1) % 2 == 1) s = -s;
        signs.push_back(s);
    }
    return variations(signs);
}

int poly_sign(const IntegerPolynomial& p, const Rational& x)
{
    const Rational v = p(x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Split point strictly inside (lo, hi) where p does not vanish.
Rational safe_split(const IntegerPolynomial& p, const Rational& lo, const Rational& hi)
{
    Rational mid = (lo + hi) / 2;
    Rational step = (hi - lo) / 8;
    while (poly_sign(p, mid) == 0) {
        mid = (lo + hi) / 2 + step;
        step /= 2;
    }
    return mid;
}

}  // namespace

IntegerPolynomial::IntegerPolynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients))
{
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntegerPolynomial::IntegerPolynomial(std::initializer_list<long long> coefficients)
{
    for (long long c : coefficients) coeffs_.emplace_back(c);
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational IntegerPolynomial::operator()(const Rational& x) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + Rational(*it);
    return acc;
}

double IntegerPolynomial::operator()(double x) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->convert_to<double>();
    return acc;
}

IntegerPolynomial IntegerPolynomial::derivative() const
{
    std::vector<BigInt> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long long>(i));
    return IntegerPolynomial(std::move(d));
}

IntegerPolynomial IntegerPolynomial::squarefree_part() const
{
    if (is_zero()) throw std::invalid_argument("squarefree part of the zero polynomial");
    const RPoly p = to_rational(*this);
    const RPoly g = gcd(p, tbadilog::derivative(p));
    return to_primitive(divmod(p, g).first);
}

std::string IntegerPolynomial::to_string(std::string_view var) const
{
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        const BigInt mag = boost::multiprecision::abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        if (mag != 1 || i == 0) os << mag;
        if (i >= 1) os << var;
        if (i >= 2) os << '^' << i;
    }
    return os.str();
}

Rational eval_poly_at(const IntegerPolynomial& p, const Rational& x)
{
    return p(x);
}

int sturm_count(const IntegerPolynomial& p, const Rational& lo, const Rational& hi)
{
    if (p.degree() < 1) throw std::invalid_argument("Sturm count needs a nonconstant polynomial");
    const auto chain = sturm_chain(p);
    return variations_at(chain, lo) - variations_at(chain, hi);
}

int sturm_count_all(const IntegerPolynomial& p)
{
    if (p.degree() < 1) throw std::invalid_argument("Sturm count needs a nonconstant polynomial");
    const auto chain = sturm_chain(p);
    return variations_at_infinity(chain, false) - variations_at_infinity(chain, true);
}

AlgebraicNumber::AlgebraicNumber(IntegerPolynomial poly, Rational lo, Rational hi)
    : poly_(poly.squarefree_part()), lo_(std::move(lo)), hi_(std::move(hi))
{
    if (poly_.degree() < 1) throw std::invalid_argument("algebraic number needs a nonconstant polynomial");
    if (!(lo_ < hi_)) throw std::invalid_argument("isolating interval must satisfy lo < hi");
    if (poly_sign(poly_, lo_) == 0 || poly_sign(poly_, hi_) == 0)
        throw std::invalid_argument("isolating interval endpoint is a root");
    if (sturm_count(poly_, lo_, hi_) != 1)
        throw std::invalid_argument("interval does not isolate exactly one root of " + poly_.to_string());
}

Rational AlgebraicNumber::approximate(const Rational& eps) const
{
    return refine(*this, eps).midpoint();
}

double AlgebraicNumber::to_double() const
{
    return tbadilog::to_double(approximate(Rational(1, BigInt(1) << 70)));
}

std::vector<AlgebraicNumber> isolate_real_roots(const IntegerPolynomial& p)
{
    if (p.degree() < 1) throw std::invalid_argument("root isolation needs a nonconstant polynomial");
    const IntegerPolynomial sq = p.squarefree_part();
    const auto chain = sturm_chain(sq);

    Rational bound = 0;
    for (const auto& c : sq.coefficients())
        bound = std::max(bound, Rational(boost::multiprecision::abs(c), boost::multiprecision::abs(sq.leading())));
    bound += 1;

    std::vector<AlgebraicNumber> roots;
    struct Pending {
        Rational lo, hi;
        int vlo, vhi;
    };
    std::vector<Pending> stack;
    stack.push_back({-bound, bound, variations_at(chain, -bound), variations_at(chain, bound)});
    while (!stack.empty()) {
        Pending cur = stack.back();
        stack.pop_back();
        const int count = cur.vlo - cur.vhi;
        if (count == 0) continue;
        if (count == 1) {
            roots.emplace_back(sq, cur.lo, cur.hi);
            continue;
        }
        const Rational mid = safe_split(sq, cur.lo, cur.hi);
        const int vmid = variations_at(chain, mid);
        // Right half pushed first so the left half is processed first.
        stack.push_back({mid, cur.hi, vmid, cur.vhi});
        stack.push_back({cur.lo, mid, cur.vlo, vmid});
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.lo() < b.lo(); });
    return roots;
}

RationalInterval refine(const AlgebraicNumber& a, const Rational& eps)
{
    if (eps <= 0) throw std::invalid_argument("refinement width must be positive");
    Rational lo = a.lo();
    Rational hi = a.hi();
    const int slo = poly_sign(a.poly(), lo);
    while (hi - lo > eps) {
        const Rational mid = (lo + hi) / 2;
        const int s = poly_sign(a.poly(), mid);
        if (s == 0) {
            const Rational half = eps / 4;
            return {std::max(lo, Rational(mid - half)), std::min(hi, Rational(mid + half))};
        }
        if (s == slo)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

RationalInterval refine(const AlgebraicNumber& a, double eps)
{
    if (!(eps > 0)) throw std::invalid_argument("refinement width must be positive");
    return refine(a, Rational(eps));
}

namespace {

AlgebraicNumber select_root(const IntegerPolynomial& p, double lo, double hi)
{
    std::optional<AlgebraicNumber> found;
    for (auto& r : isolate_real_roots(p)) {
        const double v = r.to_double();
        if (v > lo && v < hi) {
            if (found) throw std::logic_error("constant hint does not select a unique root");
            found = r;
        }
    }
    if (!found) throw std::logic_error("constant hint selects no root");
    return *found;
}

std::vector<NamedConstant> build_catalog()
{
    const IntegerPolynomial golden{-1, 1, 1};
    const IntegerPolynomial heptagon{1, -2, -1, 1};  // 2cos(pi/7), 2cos(3pi/7), 2cos(5pi/7)
    const IntegerPolynomial watson{-1, -1, 2, 1};
    const IntegerPolynomial watson_neg{1, -1, -2, 1};
    const IntegerPolynomial quartic_delta{-1, -1, 0, 2, 1};
    const IntegerPolynomial quartic_u{-1, -3, 3, 1, 1};
    const IntegerPolynomial sextic{1, -7, 20, -28, 19, -7, 1};
    const double inf = 1e9;
    return {
        {"rho", "positive root of x^2 + x - 1", select_root(golden, 0, 1)},
        {"lambda", "2cos(pi/7), root of x^3 - x^2 - 2x + 1", select_root(heptagon, 1, 2)},
        {"alpha", "lambda - 1, root of t^3 + 2t^2 - t - 1", select_root(watson, 0, 1)},
        {"beta", "1/lambda, minus a root of t^3 + 2t^2 - t - 1", select_root(watson_neg, 0, 1)},
        {"gamma", "1 - 1/lambda, -1/gamma a root of t^3 + 2t^2 - t - 1", select_root(heptagon, 0, 1)},
        {"delta", "positive root of x^4 + 2x^3 - x - 1", select_root(quartic_delta, 0, inf)},
        {"u_plus", "positive root of u^4 + u^3 + 3u^2 - 3u - 1", select_root(quartic_u, 0, inf)},
        {"u_minus", "negative root of u^4 + u^3 + 3u^2 - 3u - 1", select_root(quartic_u, -inf, 0)},
        {"mu", "real root > 1 of t^6 - 7t^5 + 19t^4 - 28t^3 + 20t^2 - 7t + 1", select_root(sextic, 1, inf)},
        {"nu", "real root in (0,1) of t^6 - 7t^5 + 19t^4 - 28t^3 + 20t^2 - 7t + 1", select_root(sextic, 0, 1)},
    };
}

}  // namespace

const std::vector<NamedConstant>& constant_catalog()
{
    static const std::vector<NamedConstant> catalog = build_catalog();
    return catalog;
}

const AlgebraicNumber* find_constant(std::string_view name)
{
    for (const auto& c : constant_catalog())
        if (c.name == name) return &c.value;
    return nullptr;
}

}  // namespace tbadilog

#include "tbadilog/rational.hpp"

#include <cctype>

namespace tbadilog {

namespace {

bool is_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_fraction(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    const std::string_view num = body.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den))
        throw ParseError("malformed fraction '" + std::string(text) + "'");
    BigInt n{std::string(num)};
    BigInt d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r)
{
    const BigInt n = boost::multiprecision::numerator(r);
    const BigInt d = boost::multiprecision::denominator(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

double to_double(const Rational& r)
{
    return r.convert_to<double>();
}

bool rational_sqrt(const Rational& r, Rational& root)
{
    if (r < 0) return false;
    const BigInt n = boost::multiprecision::numerator(r);
    const BigInt d = boost::multiprecision::denominator(r);
    const BigInt sn = boost::multiprecision::sqrt(n);
    const BigInt sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    root = Rational(sn, sd);
    return true;
}

BigInt lcm(const BigInt& a, const BigInt& b)
{
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

}  // namespace tbadilog

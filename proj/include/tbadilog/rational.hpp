#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace tbadilog {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised for malformed user input (fractions, expressions, catalog records).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "p", "-p" or "p/q" with q > 0. Whitespace is not accepted.
Rational parse_fraction(std::string_view text);

/// Canonical "p/q" form; integers are printed without the denominator.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact rational square root if r is a square of a rational.
bool rational_sqrt(const Rational& r, Rational& root);

BigInt lcm(const BigInt& a, const BigInt& b);

}  // namespace tbadilog

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tbadilog/rational.hpp"

namespace tbadilog {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

/// Value of a catalog constant in the given floating type.
template <class Real>
Real constant_value(std::string_view name);

template <>
double constant_value<double>(std::string_view name);
template <>
HighPrecision constant_value<HighPrecision>(std::string_view name);

template <class Real>
Real rational_value(const Rational& r);

template <>
double rational_value<double>(const Rational& r);
template <>
HighPrecision rational_value<HighPrecision>(const Rational& r);

struct ExprNode {
    enum class Kind { number, constant, add, sub, mul, div, neg, sqrt, pow };
    Kind kind = Kind::number;
    Rational number;
    std::string name;
    unsigned exponent = 0;
    std::vector<std::shared_ptr<const ExprNode>> args;
};

/// Arithmetic expression over rationals and catalog constants.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' integer)?
///   atom   := integer | name | 'sqrt' '(' expr ')' | '(' expr ')'
///
/// Names must resolve in the constant catalog; otherwise parsing throws ParseError.
class Expression {
public:
    explicit Expression(std::string_view text);

    const std::string& text() const { return text_; }
    const ExprNode& root() const { return *root_; }
    /// Catalog constants referenced, in order of first appearance.
    std::vector<std::string> constants() const;

    /// Throws std::domain_error for division by zero or the square root of a negative number.
    template <class Real>
    Real evaluate() const;

    double value() const { return evaluate<double>(); }

private:
    std::string text_;
    std::shared_ptr<const ExprNode> root_;
};

namespace detail {

template <class Real>
Real eval_node(const ExprNode& n)
{
    using std::sqrt;
    switch (n.kind) {
    case ExprNode::Kind::number: return rational_value<Real>(n.number);
    case ExprNode::Kind::constant: return constant_value<Real>(n.name);
    case ExprNode::Kind::add: return eval_node<Real>(*n.args[0]) + eval_node<Real>(*n.args[1]);
    case ExprNode::Kind::sub: return eval_node<Real>(*n.args[0]) - eval_node<Real>(*n.args[1]);
    case ExprNode::Kind::mul: return eval_node<Real>(*n.args[0]) * eval_node<Real>(*n.args[1]);
    case ExprNode::Kind::div: {
        const Real den = eval_node<Real>(*n.args[1]);
        if (den == 0) throw std::domain_error("division by zero");
        return eval_node<Real>(*n.args[0]) / den;
    }
    case ExprNode::Kind::neg: return -eval_node<Real>(*n.args[0]);
    case ExprNode::Kind::sqrt: {
        const Real v = eval_node<Real>(*n.args[0]);
        if (v < 0) throw std::domain_error("square root of a negative number");
        return sqrt(v);
    }
    case ExprNode::Kind::pow: {
        const Real base = eval_node<Real>(*n.args[0]);
        Real out = 1;
        for (unsigned i = 0; i < n.exponent; ++i) out *= base;
        return out;
    }
    }
    throw std::logic_error("unknown expression node");
}

}  // namespace detail

template <class Real>
Real Expression::evaluate() const
{
    return detail::eval_node<Real>(*root_);
}

}  // namespace tbadilog

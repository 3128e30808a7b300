#include "tbadilog/expression.hpp"

#include <cctype>
#include <map>
#include <mutex>

#include "tbadilog/algebraics.hpp"

namespace tbadilog {

template <>
double rational_value<double>(const Rational& r)
{
    return to_double(r);
}

template <>
HighPrecision rational_value<HighPrecision>(const Rational& r)
{
    return HighPrecision(boost::multiprecision::numerator(r).str()) /
           HighPrecision(boost::multiprecision::denominator(r).str());
}

template <>
double constant_value<double>(std::string_view name)
{
    const auto* c = find_constant(name);
    if (!c) throw ParseError("unknown constant '" + std::string(name) + "'");
    return c->to_double();
}

template <>
HighPrecision constant_value<HighPrecision>(std::string_view name)
{
    static std::mutex mutex;
    static std::map<std::string, HighPrecision, std::less<>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    const auto* c = find_constant(name);
    if (!c) throw ParseError("unknown constant '" + std::string(name) + "'");
    // 2^-200 is well below the 50-digit working precision.
    const Rational eps(1, BigInt(1) << 200);
    const HighPrecision v = rational_value<HighPrecision>(c->approximate(eps));
    cache.emplace(std::string(name), v);
    return v;
}

namespace {

using Node = std::shared_ptr<const ExprNode>;

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Node parse()
    {
        Node n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError("expression '" + std::string(s_) + "': " + msg + " at offset " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static Node make(ExprNode::Kind k, std::vector<Node> args)
    {
        auto n = std::make_shared<ExprNode>();
        n->kind = k;
        n->args = std::move(args);
        return n;
    }

    Node expr()
    {
        Node lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make(ExprNode::Kind::add, {lhs, term()});
            else if (accept('-'))
                lhs = make(ExprNode::Kind::sub, {lhs, term()});
            else
                return lhs;
        }
    }

    Node term()
    {
        Node lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make(ExprNode::Kind::mul, {lhs, unary()});
            else if (accept('/'))
                lhs = make(ExprNode::Kind::div, {lhs, unary()});
            else
                return lhs;
        }
    }

    Node unary()
    {
        if (accept('-')) return make(ExprNode::Kind::neg, {unary()});
        return power();
    }

    Node power()
    {
        Node base = atom();
        if (!accept('^')) return base;
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be a non-negative integer");
        if (pos_ - start > 3) fail("exponent too large");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::pow;
        n->exponent = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
        n->args = {base};
        return n;
    }

    Node atom()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Node inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::number;
            n->number = Rational(BigInt(std::string(s_.substr(start, pos_ - start))));
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name(s_.substr(start, pos_ - start));
            if (name == "sqrt") {
                if (!accept('(')) fail("expected '(' after sqrt");
                Node inner = expr();
                if (!accept(')')) fail("expected ')'");
                return make(ExprNode::Kind::sqrt, {inner});
            }
            if (!find_constant(name)) {
                pos_ = start;
                fail("unknown constant '" + name + "'");
            }
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::constant;
            n->name = name;
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

void collect(const ExprNode& n, std::vector<std::string>& out)
{
    if (n.kind == ExprNode::Kind::constant) {
        for (const auto& s : out)
            if (s == n.name) return;
        out.push_back(n.name);
    }
    for (const auto& a : n.args) collect(*a, out);
}

}  // namespace

Expression::Expression(std::string_view text) : text_(text), root_(Parser(text).parse()) {}

std::vector<std::string> Expression::constants() const
{
    std::vector<std::string> out;
    collect(*root_, out);
    return out;
}

}  // namespace tbadilog

#include "tbadilog/identities.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tbadilog/dilog.hpp"

#ifndef TBADILOG_INSTALLED_DATA_DIR
#define TBADILOG_INSTALLED_DATA_DIR "data"
#endif

namespace tbadilog {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Splits off the first whitespace-delimited word.
std::pair<std::string_view, std::string_view> head(std::string_view s)
{
    s = trim(s);
    const auto sp = s.find_first_of(" \t");
    if (sp == std::string_view::npos) return {s, {}};
    return {s.substr(0, sp), trim(s.substr(sp))};
}

std::vector<std::string_view> words(std::string_view s)
{
    std::vector<std::string_view> out;
    while (!(s = trim(s)).empty()) {
        auto [w, rest] = head(s);
        out.push_back(w);
        s = rest;
    }
    return out;
}

}  // namespace

std::vector<IdentityEntry> parse_catalog(std::string_view text)
{
    std::vector<IdentityEntry> out;
    std::optional<IdentityEntry> cur;
    bool have_target = false;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("catalog line " + std::to_string(lineno) + ": " + msg);
    };
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto [key, rest] = head(line);
        if (!cur) {
            if (key != "identity") fail("expected 'identity'");
            if (rest.empty() || words(rest).size() != 1) fail("identity needs one name");
            for (const auto& e : out)
                if (e.name == rest) fail("duplicate identity '" + std::string(rest) + "'");
            cur.emplace(IdentityEntry{std::string(rest), {}, Rational(0), std::nullopt, ProofStatus::proven, ""});
            have_target = false;
            continue;
        }
        try {
            if (key == "term") {
                auto [coef, expr] = head(rest);
                if (expr.empty()) fail("term needs a coefficient and an argument");
                cur->terms.push_back({parse_fraction(coef), Expression(expr)});
            } else if (key == "target") {
                if (words(rest).size() != 1) fail("target needs one fraction");
                cur->target = parse_fraction(rest);
                have_target = true;
            } else if (key == "matrix") {
                const auto w = words(rest);
                if (w.size() != 3) fail("matrix needs three fractions");
                cur->matrix = RationalSymmetricMatrix(parse_fraction(w[0]), parse_fraction(w[1]), parse_fraction(w[2]));
            } else if (key == "status") {
                if (rest == "proven")
                    cur->status = ProofStatus::proven;
                else if (rest == "unproven")
                    cur->status = ProofStatus::unproven;
                else
                    fail("status must be proven or unproven");
            } else if (key == "source") {
                cur->source = std::string(rest);
            } else if (key == "end") {
                if (!rest.empty()) fail("trailing text after 'end'");
                if (cur->terms.empty()) fail("identity '" + cur->name + "' has no terms");
                if (!have_target) fail("identity '" + cur->name + "' has no target");
                out.push_back(std::move(*cur));
                cur.reset();
            } else {
                fail("unknown field '" + std::string(key) + "'");
            }
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            if (msg.rfind("catalog line", 0) == 0) throw;
            fail(msg);
        }
    }
    if (cur) throw ParseError("catalog: identity '" + cur->name + "' is missing 'end'");
    return out;
}

std::string serialize_catalog(const std::vector<IdentityEntry>& entries)
{
    std::ostringstream os;
    bool first = true;
    for (const auto& e : entries) {
        if (!first) os << '\n';
        first = false;
        os << "identity " << e.name << '\n';
        for (const auto& t : e.terms) os << "  term " << to_string(t.coefficient) << ' ' << t.argument.text() << '\n';
        os << "  target " << to_string(e.target) << '\n';
        if (e.matrix)
            os << "  matrix " << to_string(e.matrix->a) << ' ' << to_string(e.matrix->b) << ' '
               << to_string(e.matrix->d) << '\n';
        os << "  status " << to_string(e.status) << '\n';
        if (!e.source.empty()) os << "  source " << e.source << '\n';
        os << "end\n";
    }
    return os.str();
}

std::vector<IdentityEntry> load_catalog(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open catalog " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("TBADILOG_DATA_DIR"); env && *env) return env;
    return TBADILOG_INSTALLED_DATA_DIR;
}

std::filesystem::path default_catalog_path()
{
    return default_data_dir() / "identities.cat";
}

const IdentityEntry* find_entry(const std::vector<IdentityEntry>& entries, std::string_view name)
{
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::plausible: return "plausible";
    case Verdict::failed: return "failed";
    }
    return "failed";
}

std::string to_string(ProofStatus s)
{
    return s == ProofStatus::proven ? "proven" : "unproven";
}

Verdict classify_residual(double residual)
{
    if (residual <= 1e-12) return Verdict::verified;
    if (residual <= 1e-8) return Verdict::plausible;
    return Verdict::failed;
}

namespace {

template <class Real>
Real entry_sum(const IdentityEntry& e)
{
    Real sum = 0;
    for (const auto& t : e.terms) {
        Real arg = t.argument.evaluate<Real>();
        // Arguments that are exactly 0 or 1 analytically can land a rounding step outside.
        const Real slack = std::numeric_limits<Real>::epsilon() * 16;
        if (arg < 0 && arg > -slack) arg = 0;
        if (arg > 1 && arg < 1 + slack) arg = 1;
        if (arg < 0 || arg > 1)
            throw std::domain_error("identity '" + e.name + "': argument " + t.argument.text() + " outside [0,1]");
        sum += rational_value<Real>(t.coefficient) * rogers_L_generic(arg);
    }
    return sum;
}

}  // namespace

VerifyResult verify_entry(const IdentityEntry& entry, const VerifyOptions& opts)
{
    if (!(opts.precision > 0)) throw std::invalid_argument("precision must be positive");
    VerifyResult r;
    r.high_precision = opts.high_precision;
    if (opts.high_precision) {
        const HighPrecision v = entry_sum<HighPrecision>(entry);
        r.value = static_cast<double>(v);
        r.residual = static_cast<double>(abs(v - rational_value<HighPrecision>(entry.target)));
    } else {
        r.value = entry_sum<double>(entry);
        r.residual = std::abs(r.value - to_double(entry.target));
    }
    r.verdict = classify_residual(r.residual);
    return r;
}

double verify(const IdentityEntry& entry, double precision)
{
    VerifyOptions o;
    o.precision = precision;
    // Binary64 constants are already refined past double precision; fall back to
    // 50 digits only when the requested precision is out of binary64 reach.
    o.high_precision = precision < 1e-13;
    return verify_entry(entry, o).residual;
}

CrossCheckResult cross_check_tba(const IdentityEntry& entry, const RationalSymmetricMatrix& m, const SolveOptions& opts)
{
    std::vector<double> args;
    for (const auto& t : entry.terms) {
        if (boost::multiprecision::denominator(t.coefficient) != 1 || t.coefficient <= 0 || t.coefficient > 2)
            throw std::invalid_argument("identity '" + entry.name + "' is not of the form L(x) + L(y)");
        const double v = t.argument.value();
        for (int k = 0; k < static_cast<int>(boost::multiprecision::numerator(t.coefficient)); ++k) args.push_back(v);
    }
    if (args.size() != 2) throw std::invalid_argument("identity '" + entry.name + "' does not have two arguments");
    const TbaSolution s = solve_r2(m, opts);
    CrossCheckResult r;
    r.c = c_of(s);
    r.c_residual = std::abs(r.c - to_double(entry.target));
    const double direct = std::max(std::abs(s.x - args[0]), std::abs(s.y - args[1]));
    const double swapped = std::max(std::abs(s.x - args[1]), std::abs(s.y - args[0]));
    r.swapped = swapped < direct;
    r.coordinate_residual = std::min(direct, swapped);
    return r;
}

}  // namespace tbadilog

#include "tbadilog/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_util.hpp"
#include "tbadilog/analysis.hpp"
#include "tbadilog/charges.hpp"
#include "tbadilog/expression.hpp"
#include "tbadilog/identities.hpp"
#include "tbadilog/qseries.hpp"
#include "tbadilog/search.hpp"
#include "tbadilog/tba.hpp"

#ifndef TBADILOG_VERSION
#define TBADILOG_VERSION "0.0.0"
#endif

namespace tbadilog {

namespace {

using nlohmann::json;
using detail::kSolverAccuracy;
using detail::matrix_json;
using detail::real_json;

// Malformed input detected after CLI11 has accepted the command line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MatrixInput {
    int rank = 2;
    RationalSymmetricMatrix m;  // rank 1 uses m.a and m.a_infinite
};

Rational parse_entry(const std::string& s, bool* infinite)
{
    if (s == "inf" || s == "infinity") {
        if (!infinite) throw UsageError("'inf' is only allowed on the diagonal");
        *infinite = true;
        return 0;
    }
    try {
        return parse_fraction(s);
    } catch (const ParseError& e) {
        throw UsageError("malformed fraction '" + s + "'");
    }
}

MatrixInput parse_matrix(const std::vector<std::string>& vals, const std::string& scale)
{
    MatrixInput in;
    if (vals.size() == 1) {
        in.rank = 1;
        in.m.a = parse_entry(vals[0], &in.m.a_infinite);
    } else if (vals.size() == 3) {
        in.m.a = parse_entry(vals[0], &in.m.a_infinite);
        in.m.b = parse_entry(vals[1], nullptr);
        in.m.d = parse_entry(vals[2], &in.m.d_infinite);
    } else {
        throw UsageError("-A takes one entry (rank 1) or three entries a b d (rank 2)");
    }
    if (!scale.empty()) {
        const Rational s = parse_entry(scale, nullptr);
        if (s <= 0) throw UsageError("--scale must be positive");
        in.m.a *= s;
        in.m.b *= s;
        in.m.d *= s;
    }
    return in;
}

RationalSymmetricMatrix require_rank2(const MatrixInput& in, bool finite)
{
    if (in.rank != 2) throw UsageError("this command needs a 2x2 matrix: -A a b d");
    if (finite && (in.m.a_infinite || in.m.d_infinite)) throw UsageError("this command needs finite entries");
    return in.m;
}

double env_tolerance()
{
    const char* env = std::getenv("TBADILOG_TOLERANCE");
    if (!env || !*env) return kDefaultTolerance;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v))
        throw UsageError(std::string("TBADILOG_TOLERANCE is not a positive number: '") + env + "'");
    return v;
}

std::string fmt(double v, int digits = 12)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string sci(double v)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

std::string join(const std::vector<std::string>& xs)
{
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : " ") + x;
    return out;
}

struct Output {
    bool as_json = false;
    bool header = true;
    std::string command;
    std::ostream* out = nullptr;

    void emit(json j, const std::string& text) const
    {
        if (as_json) {
            json full;
            full["command"] = command;
            if (header) full["version"] = version_string();
            for (auto& [k, v] : j.items()) full[k] = v;
            *out << full.dump(2) << '\n';
        } else {
            if (header) *out << "# tbadilog " << version_string() << '\n';
            *out << text;
        }
    }
};

json match_json(const ChargeMatch& m)
{
    json j;
    j["labels"] = m.labels();
    if (m.rational) j["rational"] = to_string(m.rational->value);
    if (m.minimal) j["minimal"] = {{"s", m.minimal->s}, {"t", m.minimal->t}, {"value", to_string(m.minimal->value())}};
    if (m.parafermion) j["parafermion"] = {{"n", m.parafermion->n}, {"value", to_string(m.parafermion->value())}};
    return j;
}

ChargeMatch recognize_or_empty(double c, double tol)
{
    RecognizeOptions o;
    o.tol = tol;
    if (!(c >= -tol && c <= 2 + tol)) return {};
    return recognize(c, o);
}

// ---- subcommands ---------------------------------------------------------

int cmd_solve(const MatrixInput& in, bool relaxed, const Output& o)
{
    const double tol = env_tolerance();
    std::ostringstream t;
    json j;
    TbaSolution s;
    if (in.rank == 1) {
        s = in.m.a_infinite ? solve_r1_infinite() : solve_r1(in.m.a);
        j["matrix"] = in.m.a_infinite ? std::string("inf") : to_string(in.m.a);
        t << "A = (" << (in.m.a_infinite ? std::string("inf") : to_string(in.m.a)) << ")\n";
        t << "x = " << fmt(s.x) << '\n';
    } else {
        SolveOptions opts;
        opts.require_range = !relaxed;
        s = solve_r2(in.m, opts);
        j["matrix"] = matrix_json(in.m);
        t << "A = " << in.m.to_string() << '\n';
        t << "x = " << fmt(s.x) << '\n' << "y = " << fmt(s.y) << '\n';
        j["y"] = real_json(s.y, kSolverAccuracy);
    }
    const double c = c_of(s);
    const ChargeMatch match = recognize_or_empty(c, tol);
    j["rank"] = in.rank;
    j["x"] = real_json(s.x, kSolverAccuracy);
    j["c"] = real_json(c, kSolverAccuracy);
    j["residual"] = s.residual;
    j["multiplicity"] = s.multiplicity;
    j["boundary_solution"] = s.boundary_flag;
    j["principal_is_boundary"] = s.principal_is_boundary;
    j["solutions"] = json::array();
    for (const auto& p : s.interior) j["solutions"].push_back({{"x", real_json(p.x, kSolverAccuracy)}, {"y", real_json(p.y, kSolverAccuracy)}});
    j["match"] = match_json(match);
    j["tolerance"] = tol;

    t << "c = " << fmt(c) << '\n';
    t << "residual = " << sci(s.residual) << '\n';
    if (in.rank == 2) {
        t << "solutions = " << s.multiplicity << (s.principal_is_boundary ? " (boundary only)" : "") << '\n';
        if (s.interior.size() > 1)
            for (const auto& p : s.interior) t << "  x = " << fmt(p.x) << "  y = " << fmt(p.y) << '\n';
    }
    t << "match = " << (match.empty() ? std::string("none") : join(match.labels())) << '\n';
    o.emit(j, t.str());
    return kExitOk;
}

int cmd_classify(const RationalSymmetricMatrix& m, const Output& o)
{
    if (!check_range(m)) throw std::domain_error("matrix " + m.to_string() + " is outside the admissible range");
    const auto r = classify_vs_one(m);
    json j;
    j["matrix"] = matrix_json(m);
    j["relation"] = to_string(r.relation);
    j["b_vs_half"] = r.b_vs_half;
    j["ad_vs_gap"] = r.ad_vs_gap;
    j["ad"] = to_string(r.ad);
    j["gap"] = to_string(r.gap);
    j["reason"] = r.reason;
    std::ostringstream t;
    t << "A = " << m.to_string() << '\n';
    t << "c " << (r.relation == Relation::greater ? ">" : r.relation == Relation::equal ? "=" : "<") << " 1\n";
    t << "ad = " << to_string(r.ad) << ", (1/2 - b)^2 = " << to_string(r.gap) << '\n';
    t << r.reason << '\n';
    o.emit(j, t.str());
    return kExitOk;
}

int cmd_bounds(const RationalSymmetricMatrix& input, const Output& o)
{
    if (!check_range(input)) throw std::domain_error("matrix " + input.to_string() + " is outside the admissible range");
    const RationalSymmetricMatrix m = canonical(input);
    const auto b = bounds_on_c(m);
    const auto u = uniqueness_report(m);
    json j;
    j["matrix"] = matrix_json(m);
    j["swapped"] = !(m == input);
    j["case"] = to_string(b.case_tag);
    j["lower"] = real_json(b.lower, 1e-12);
    j["upper"] = real_json(b.upper, 1e-12);
    j["uniqueness_guaranteed"] = u.guaranteed;
    j["det"] = real_json(u.det, 1e-15);
    j["threshold"] = real_json(u.threshold, 1e-12);
    std::ostringstream t;
    t << "A = " << m.to_string() << (m == input ? "" : " (swapped)") << '\n';
    t << "case " << to_string(b.case_tag) << '\n';
    t << fmt(b.lower) << " <= c <= " << fmt(b.upper) << '\n';
    t << "uniqueness " << (u.guaranteed ? "guaranteed" : "not guaranteed") << " (det " << fmt(u.det, 6) << ", threshold "
      << fmt(u.threshold, 6) << ")\n";
    o.emit(j, t.str());
    return kExitOk;
}

int cmd_dual(const RationalSymmetricMatrix& m, const Output& o)
{
    const RationalSymmetricMatrix d = dual(m);
    SolveOptions relaxed;
    relaxed.require_range = false;
    json j;
    j["matrix"] = matrix_json(m);
    j["dual"] = matrix_json(d);
    j["dual_in_range"] = check_range(d);
    std::ostringstream t;
    t << "A = " << m.to_string() << '\n' << "dual = " << d.to_string() << (check_range(d) ? "" : " (outside the range)") << '\n';
    const TbaSolution sa = solve_r2(m, relaxed), sd = solve_r2(d, relaxed);
    const double ca = c_of(sa), cd = c_of(sd);
    j["c"] = real_json(ca, kSolverAccuracy);
    j["dual_c"] = real_json(cd, kSolverAccuracy);
    j["sum"] = real_json(ca + cd, 2 * kSolverAccuracy);
    j["unique_both"] = sa.multiplicity == 1 && sd.multiplicity == 1;
    t << "c = " << fmt(ca) << "  dual c = " << fmt(cd) << "  sum = " << fmt(ca + cd) << '\n';
    if (sa.multiplicity != 1 || sd.multiplicity != 1) t << "warning: a solution is not unique; the sum rule need not hold\n";
    o.emit(j, t.str());
    return kExitOk;
}

int cmd_recognize(const std::string& value, double tol_opt, const Output& o)
{
    double c;
    char* end = nullptr;
    c = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0' || !std::isfinite(c)) {
        try {
            c = Expression(value).value();
        } catch (const ParseError& e) {
            throw UsageError(std::string("cannot read central charge: ") + e.what());
        }
    }
    RecognizeOptions opts;
    opts.tol = tol_opt > 0 ? tol_opt : env_tolerance();
    ChargeMatch m;
    try {
        m = recognize(c, opts);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json j = match_json(m);
    j["c"] = real_json(c, 0.0);
    j["tolerance"] = opts.tol;
    std::ostringstream t;
    t << "c = " << fmt(c) << '\n';
    if (m.empty()) t << "no match within " << sci(opts.tol) << '\n';
    if (m.rational) t << "rational " << to_string(m.rational->value) << '\n';
    if (m.minimal) {
        t << "minimal " << minimal_label(m.minimal->s, m.minimal->t);
        for (const auto& [s, tt] : m.minimal->alternatives) t << ", " << minimal_label(s, tt);
        t << '\n';
    }
    if (m.parafermion) t << "parafermion " << parafermion_label(m.parafermion->n) << '\n';
    o.emit(j, t.str());
    return kExitOk;
}

int cmd_verify(const std::string& catalog, const std::string& only, bool hp, const Output& o)
{
    const auto entries = load_catalog(catalog.empty() ? default_catalog_path() : std::filesystem::path(catalog));
    VerifyOptions opts;
    opts.high_precision = hp;
    const double eps = hp ? 1e-45 : 1e-15;
    json rows = json::array();
    std::ostringstream t;
    t << std::left << std::setw(22) << "name" << std::setw(10) << "status" << std::setw(12) << "residual" << "verdict\n";
    bool failed = false;
    int shown = 0;
    for (const auto& e : entries) {
        if (!only.empty() && e.name != only) continue;
        ++shown;
        const auto r = verify_entry(e, opts);
        failed = failed || r.verdict == Verdict::failed;
        rows.push_back({{"name", e.name},
                        {"status", to_string(e.status)},
                        {"target", to_string(e.target)},
                        {"value", real_json(r.value, eps)},
                        {"residual", real_json(r.residual, eps)},
                        {"verdict", to_string(r.verdict)}});
        t << std::left << std::setw(22) << e.name << std::setw(10) << to_string(e.status) << std::setw(12) << sci(r.residual)
          << to_string(r.verdict) << '\n';
    }
    if (!only.empty() && shown == 0) throw UsageError("no identity named '" + only + "'");
    json j;
    j["high_precision"] = hp;
    j["entries"] = rows;
    o.emit(j, t.str());
    return failed ? kExitFailure : kExitOk;
}

const FermionicForm& pick_form(const std::vector<FermionicForm>& forms, const std::string& name)
{
    for (const auto& f : forms)
        if (f.name == name) return f;
    throw UsageError("no form named '" + name + "'");
}

std::vector<FermionicForm> forms_from(const std::string& path)
{
    return load_forms(path.empty() ? default_data_dir() / "forms.cat" : std::filesystem::path(path));
}

int cmd_expand(const std::string& path, const std::string& name, const std::string& order_text, const Output& o)
{
    const auto forms = forms_from(path);
    const auto& f = pick_form(forms, name);
    const Rational order = parse_entry(order_text, nullptr);
    if (order <= 0) throw UsageError("--order must be positive");
    const QSeries s = expand(f, order);
    json j;
    j["form"] = f.name;
    j["order"] = to_string(order);
    j["denominator"] = s.denom;
    j["terms"] = json::array();
    for (const auto& [k, c] : s.coeffs) j["terms"].push_back({{"exponent", to_string(Rational(k, s.denom))}, {"coefficient", c}});
    o.emit(j, s.export_text());
    return kExitOk;
}

int cmd_ceff(const std::string& path, const std::string& name, const std::vector<double>& eps, const Output& o)
{
    const auto forms = forms_from(path);
    std::vector<const FermionicForm*> picked;
    if (name.empty())
        for (const auto& f : forms) picked.push_back(&f);
    else
        picked.push_back(&pick_form(forms, name));
    json rows = json::array();
    std::ostringstream t;
    t << std::left << std::setw(12) << "form" << std::setw(12) << "estimate" << std::setw(12) << "tba c" << "difference\n";
    for (const auto* f : picked) {
        const auto e = eps.empty() ? estimate_ceff(*f) : estimate_ceff(*f, eps);
        const double c = tba_c(*f);
        json r;
        r["form"] = f->name;
        r["matrix"] = f->matrix_string();
        // The linear extrapolation leaves an O(eps^2) error.
        r["estimate"] = real_json(e.c, 0.02);
        r["tba_c"] = real_json(c, kSolverAccuracy);
        r["difference"] = real_json(e.c - c, 0.02);
        r["slope"] = real_json(e.slope, 0.1);
        r["eps"] = e.eps;
        r["samples"] = e.samples;
        r["well_behaved"] = e.well_behaved;
        if (!e.diagnostics.empty()) r["diagnostics"] = e.diagnostics;
        rows.push_back(r);
        t << std::left << std::setw(12) << f->name << std::setw(12) << fmt(e.c, 6) << std::setw(12) << fmt(c, 6)
          << sci(e.c - c) << (e.well_behaved ? "" : "  (" + e.diagnostics + ")") << '\n';
    }
    json j;
    j["forms"] = rows;
    o.emit(j, t.str());
    return kExitOk;
}

DiagonalMode parse_diagonal(const std::string& s)
{
    if (s == "positive") return DiagonalMode::positive;
    if (s == "allow-zero") return DiagonalMode::allow_zero;
    if (s == "zero-only") return DiagonalMode::zero_only;
    throw UsageError("--diagonal must be positive, allow-zero or zero-only");
}

}  // namespace

std::string version_string()
{
    return TBADILOG_VERSION;
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dilogarithm sums and TBA solutions for 2x2 rational matrices", "tbadilog"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", version_string());

    bool json_out = false, no_header = false;
    app.add_flag("--json", json_out, "Machine-readable output");
    app.add_flag("--no-header", no_header, "Omit the version header");

    std::vector<std::string> matrix;
    std::string scale;
    auto add_matrix = [&](CLI::App* sub) {
        sub->add_option("-A,--matrix", matrix, "Entries a b d, or a single entry for rank 1; 'inf' allowed on the diagonal")
            ->expected(1, 3)
            ->required();
        sub->add_option("--scale", scale, "Multiply every entry by this fraction");
        sub->add_flag("--json", json_out, "Machine-readable output");
        sub->add_flag("--no-header", no_header, "Omit the version header");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--json", json_out, "Machine-readable output");
        sub->add_flag("--no-header", no_header, "Omit the version header");
    };

    bool relaxed = false;
    auto* solve = app.add_subcommand("solve", "Solve the TBA equations and compute c");
    add_matrix(solve);
    solve->add_flag("--no-range-check", relaxed, "Only require a, d >= 0 (for duals)");

    auto* classify = app.add_subcommand("classify", "Compare c with 1 exactly from the entries");
    add_matrix(classify);
    auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds on c");
    add_matrix(bounds);
    auto* dual_cmd = app.add_subcommand("dual", "The dual matrix (1/4) A^-1 and the sum rule");
    add_matrix(dual_cmd);

    std::string value;
    double rtol = 0;
    auto* rec = app.add_subcommand("recognize", "Match a central charge against minimal models and parafermions");
    rec->add_option("value", value, "Decimal or expression such as 1 - 6/21")->required();
    rec->add_option("--tol", rtol, "Matching tolerance (default TBADILOG_TOLERANCE or 1e-9)")->check(CLI::PositiveNumber);
    add_common(rec);

    SearchConfig scfg;
    std::string diagonal = "positive";
    bool dedupe = false;
    double stol = 0;
    auto* srch = app.add_subcommand("search", "Enumerate matrices and report admissible ones");
    srch->add_option("--max-den", scfg.max_denominator, "Largest common denominator")->check(CLI::Range(1, 1000));
    srch->add_option("--max-num", scfg.max_numerator, "Largest numerator")->check(CLI::Range(1, 1000));
    srch->add_option("--diagonal", diagonal, "positive, allow-zero or zero-only");
    srch->add_flag("--equal-diagonal", scfg.equal_diagonal, "Only a = d");
    srch->add_flag("--require-unique", scfg.require_uniqueness, "Leave non-unique matrices out of the candidate list");
    srch->add_option("--threads", scfg.threads, "Worker threads (0 = all cores)");
    srch->add_option("--tol", stol, "Recognition tolerance (default TBADILOG_TOLERANCE or 1e-9)");
    srch->add_flag("--dedupe", dedupe, "Collapse dual pairs");
    add_common(srch);

    std::string catalog, only;
    bool hp = false;
    auto* ver = app.add_subcommand("verify-identities", "Check every catalog identity numerically");
    ver->add_option("--catalog", catalog, "Catalog file (default: data directory)");
    ver->add_option("--name", only, "Verify a single entry");
    ver->add_flag("--high-precision", hp, "Use 50-digit arithmetic");
    add_common(ver);

    std::string forms_path, form_name, order = "20";
    auto* exp = app.add_subcommand("expand", "Expand a fermionic form as a q-series");
    exp->add_option("--forms", forms_path, "Forms file (default: data directory)");
    exp->add_option("--form", form_name, "Form name")->required();
    exp->add_option("--order", order, "Highest power of q kept (fraction)");
    add_common(exp);

    std::vector<double> eps;
    auto* ceff = app.add_subcommand("ceff-estimate", "Estimate c from the q -> 1 growth of a fermionic form");
    ceff->add_option("--forms", forms_path, "Forms file (default: data directory)");
    ceff->add_option("--form", form_name, "Form name (default: all)");
    ceff->add_option("--eps", eps, "Sample points eps, q = exp(-eps)");
    add_common(ceff);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version_string() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    Output o{json_out, !no_header, sub->get_name(), &out};
    try {
        if (sub == solve) return cmd_solve(parse_matrix(matrix, scale), relaxed, o);
        if (sub == classify) return cmd_classify(require_rank2(parse_matrix(matrix, scale), true), o);
        if (sub == bounds) return cmd_bounds(require_rank2(parse_matrix(matrix, scale), true), o);
        if (sub == dual_cmd) return cmd_dual(require_rank2(parse_matrix(matrix, scale), true), o);
        if (sub == rec) return cmd_recognize(value, rtol, o);
        if (sub == srch) {
            scfg.diagonal = parse_diagonal(diagonal);
            scfg.tolerance = stol > 0 ? stol : env_tolerance();
            try {
                scfg.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            SearchReport rep = search(scfg);
            if (dedupe) rep.candidates = dedupe_by_duality(rep.candidates);
            if (json_out) {
                json j = json::parse(format_json(rep));
                o.emit(j, "");
            } else {
                o.emit({}, format_text(rep));
            }
            return kExitOk;
        }
        if (sub == ver) return cmd_verify(catalog, only, hp, o);
        if (sub == exp) return cmd_expand(forms_path, form_name, order, o);
        if (sub == ceff) return cmd_ceff(forms_path, form_name, eps, o);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace tbadilog

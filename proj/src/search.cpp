#include "tbadilog/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "json_util.hpp"

namespace tbadilog {

namespace {

// Smallest positive central charge the recognizer can return: c = 1 - 6/10.
const Rational kLowestTarget(2, 5);

struct Outcome {
    bool in_range = false;
    bool pruned = false;
    bool solved = false;
    bool boundary_only = false;
    bool unrecognized = false;
    bool suspect = false;
    bool rejected_suspect = false;
    std::optional<Candidate> candidate;
    std::optional<NonUniqueRecord> non_unique;
    std::optional<SearchFailure> failure;
};

BigInt common_denominator(const RationalSymmetricMatrix& m)
{
    BigInt den = lcm(boost::multiprecision::denominator(m.a), boost::multiprecision::denominator(m.b));
    return lcm(den, boost::multiprecision::denominator(m.d));
}

bool admissible(const ChargeMatch& m)
{
    return m.minimal.has_value() || m.parafermion.has_value();
}

double match_residual(const ChargeMatch& m)
{
    double r = std::numeric_limits<double>::infinity();
    if (m.minimal) r = std::min(r, m.minimal->residual);
    if (m.parafermion) r = std::min(r, m.parafermion->residual);
    return r;
}

ChargeMatch recognize_clamped(double c, const RecognizeOptions& opts)
{
    if (!(c >= -opts.tol && c <= 2 + opts.tol)) return {};
    return recognize(c, opts);
}

std::vector<RationalSymmetricMatrix> enumerate(const SearchConfig& cfg)
{
    std::vector<RationalSymmetricMatrix> out;
    const long long N = cfg.max_numerator;
    auto in_bounds = [&](const Rational& v) {
        return (!cfg.entry_min || v >= *cfg.entry_min) && (!cfg.entry_max || v <= *cfg.entry_max);
    };
    for (long long q = 1; q <= cfg.max_denominator; ++q) {
        for (long long p = 0; p <= N; ++p) {
            long long s_lo = 0, s_hi = p;
            switch (cfg.diagonal) {
            case DiagonalMode::positive: s_lo = 1; break;
            case DiagonalMode::allow_zero: break;
            case DiagonalMode::zero_only: s_hi = 0; break;
            }
            if (cfg.diagonal == DiagonalMode::positive && p == 0) continue;
            if (cfg.equal_diagonal) s_lo = std::max(s_lo, p);
            for (long long s = s_hi; s >= s_lo; --s) {
                for (long long r = -N; r <= N; ++r) {
                    // Skip scalings of matrices already produced at a smaller denominator.
                    if (std::gcd(std::gcd(q, p), std::gcd(std::abs(r), s)) != 1) continue;
                    RationalSymmetricMatrix m(Rational(p, q), Rational(r, q), Rational(s, q));
                    if (!in_bounds(m.a) || !in_bounds(m.b) || !in_bounds(m.d)) continue;
                    out.push_back(std::move(m));
                }
            }
        }
    }
    // Order by (denominator, a, d, b).
    std::stable_sort(out.begin(), out.end(), [](const RationalSymmetricMatrix& x, const RationalSymmetricMatrix& y) {
        const BigInt dx = common_denominator(x), dy = common_denominator(y);
        if (dx != dy) return dx < dy;
        if (x.a != y.a) return x.a < y.a;
        if (x.d != y.d) return x.d < y.d;
        return x.b < y.b;
    });
    return out;
}

Outcome process(const RationalSymmetricMatrix& m, const SearchConfig& cfg)
{
    Outcome o;
    if (!check_range(m)) return o;
    o.in_range = true;

    PropFlags flags;
    flags.classification = classify_vs_one(m).relation;
    flags.uniqueness_guaranteed = uniqueness_guarantee(m);
    if (m.d > 0) {
        flags.bounds = bounds_on_c(m);
        if (flags.bounds->upper < to_double(kLowestTarget) - cfg.tolerance) {
            o.pruned = true;
            return o;
        }
    }

    RecognizeOptions ropts = cfg.recognition;
    ropts.tol = cfg.tolerance;
    SolveOptions sopts;
    sopts.grid_points = cfg.grid_points;
    TbaSolution sol;
    try {
        sol = solve_r2(m, sopts);
    } catch (const std::exception& e) {
        o.failure = SearchFailure{m, e.what()};
        return o;
    }
    o.solved = true;
    if (sol.principal_is_boundary) {
        o.boundary_only = true;
        return o;
    }

    if (sol.multiplicity >= 2) {
        NonUniqueRecord rec;
        rec.A = m;
        for (std::size_t i = 0; i < sol.interior.size(); ++i) {
            const auto& p = sol.interior[i];
            SolutionRecord sr{p.x, p.y, 0, {}};
            TbaSolution single;
            single.x = p.x;
            single.y = p.y;
            sr.c = c_of(single);
            sr.labels = recognize_clamped(sr.c, ropts).labels();
            if (p.x == sol.x && p.y == sol.y) rec.principal = static_cast<int>(i);
            rec.solutions.push_back(std::move(sr));
        }
        o.non_unique = std::move(rec);
        if (cfg.require_uniqueness) return o;
    }

    double c = c_of(sol);
    ChargeMatch match = recognize_clamped(c, ropts);
    if (!admissible(match)) {
        o.unrecognized = true;
        return o;
    }
    bool suspect = false;
    if (match_residual(match) > kSuspectThreshold) {
        suspect = true;
        o.suspect = true;
        SolveOptions fine;
        fine.grid_points = SolveOptions{}.grid_points * 4;
        try {
            sol = solve_r2(m, fine);
        } catch (const std::exception& e) {
            o.failure = SearchFailure{m, e.what()};
            return o;
        }
        c = c_of(sol);
        match = recognize_clamped(c, ropts);
        if (!admissible(match) || match_residual(match) > kSuspectThreshold) {
            o.rejected_suspect = true;
            return o;
        }
    }

    Candidate cand;
    cand.A = m;
    cand.denominator = common_denominator(m);
    cand.c = c;
    cand.matches = std::move(match);
    cand.solution = std::move(sol);
    cand.flags = flags;
    cand.suspect = suspect;
    o.candidate = std::move(cand);
    return o;
}

std::string fmt(double v, int digits = 12)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string join(const std::vector<std::string>& xs, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

}  // namespace

std::string to_string(DiagonalMode m)
{
    switch (m) {
    case DiagonalMode::positive: return "positive";
    case DiagonalMode::allow_zero: return "allow-zero";
    case DiagonalMode::zero_only: return "zero-only";
    }
    return "positive";
}

void SearchConfig::validate() const
{
    if (max_denominator < 1) throw std::invalid_argument("max_denominator must be positive");
    if (max_numerator < 1) throw std::invalid_argument("max_numerator must be positive");
    if (max_denominator > 1000 || max_numerator > 1000) throw std::invalid_argument("search bounds above 1000 are not supported");
    if (!(tolerance >= kSolverResidualFloor)) throw std::invalid_argument("tolerance must be at least 1e-10");
    if (!(tolerance < 0.01)) throw std::invalid_argument("tolerance must be below 0.01");
    if (entry_min && entry_max && *entry_min > *entry_max) throw std::invalid_argument("empty entry range");
    if (grid_points < 1000) throw std::invalid_argument("grid_points must be at least 1000");
}

Rational Candidate::matched_value() const
{
    if (matches.minimal) return matches.minimal->value();
    if (matches.parafermion) return matches.parafermion->value();
    if (matches.rational) return matches.rational->value;
    throw std::logic_error("candidate without a match");
}

SearchReport search(const SearchConfig& cfg)
{
    cfg.validate();
    const auto matrices = enumerate(cfg);
    std::vector<Outcome> outcomes(matrices.size());

    constexpr std::size_t kChunk = 64;
    const std::size_t chunks = (matrices.size() + kChunk - 1) / kChunk;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < chunks;) {
            const std::size_t end = std::min(matrices.size(), (k + 1) * kChunk);
            for (std::size_t i = k * kChunk; i < end; ++i) outcomes[i] = process(matrices[i], cfg);
        }
    };
    unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(chunks, 1)));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SearchReport rep;
    rep.config = cfg;
    rep.stats.enumerated = static_cast<long long>(matrices.size());
    for (auto& o : outcomes) {
        if (!o.in_range) ++rep.stats.out_of_range;
        if (o.pruned) ++rep.stats.pruned_by_bounds;
        if (o.solved) ++rep.stats.solved;
        if (o.boundary_only) ++rep.stats.boundary_only;
        if (o.unrecognized) ++rep.stats.unrecognized;
        if (o.suspect) ++rep.stats.suspects;
        if (o.rejected_suspect) ++rep.stats.rejected_suspects;
        if (o.non_unique) {
            ++rep.stats.non_unique;
            rep.non_unique.push_back(std::move(*o.non_unique));
        }
        if (o.failure) rep.failures.push_back(std::move(*o.failure));
        if (o.candidate) rep.candidates.push_back(std::move(*o.candidate));
    }
    return rep;
}

std::vector<Candidate> run_search(const SearchConfig& cfg)
{
    return search(cfg).candidates;
}

std::vector<Candidate> dedupe_by_duality(const std::vector<Candidate>& cands)
{
    std::vector<bool> dropped(cands.size(), false);
    std::vector<std::optional<DualNote>> notes(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (dropped[i] || cands[i].A.det() == 0) continue;
        const RationalSymmetricMatrix d = canonical(dual(cands[i].A));
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            if (dropped[j] || !(cands[j].A == d)) continue;
            // Keep the member with c <= 1.
            const std::size_t keep = cands[i].c <= cands[j].c ? i : j;
            const std::size_t drop = keep == i ? j : i;
            notes[keep] = DualNote{cands[drop].A, cands[drop].c, cands[drop].matches.labels()};
            dropped[drop] = true;
            break;
        }
    }
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (dropped[i]) continue;
        out.push_back(cands[i]);
        if (notes[i]) out.back().dual = notes[i];
    }
    return out;
}

std::string format_text(const SearchReport& rep)
{
    const auto& cfg = rep.config;
    std::ostringstream os;
    os << "search denominators<=" << cfg.max_denominator << " numerators<=" << cfg.max_numerator
       << " diagonal=" << to_string(cfg.diagonal) << (cfg.equal_diagonal ? " a=d" : "") << " tolerance=" << cfg.tolerance
       << '\n';
    const auto& s = rep.stats;
    os << "enumerated " << s.enumerated << ", out of range " << s.out_of_range << ", pruned by bounds "
       << s.pruned_by_bounds << ", solved " << s.solved << ", boundary only " << s.boundary_only << ", unrecognized "
       << s.unrecognized << ", suspects " << s.suspects << " (rejected " << s.rejected_suspects << ")\n";
    os << "\n[candidates] " << rep.candidates.size() << '\n';
    for (const auto& c : rep.candidates) {
        os << "A = " << c.A.to_string() << "  c = " << fmt(c.c) << " = " << to_string(c.matched_value()) << "  ["
           << join(c.matches.labels(), ", ") << "]\n";
        os << "  x = " << fmt(c.solution.x) << "  y = " << fmt(c.solution.y) << "  c vs 1: "
           << to_string(c.flags.classification) << "  unique: " << (c.flags.uniqueness_guaranteed ? "guaranteed" : "not guaranteed");
        if (c.flags.bounds) os << "  bounds [" << fmt(c.flags.bounds->lower, 6) << ", " << fmt(c.flags.bounds->upper, 6) << "]";
        if (c.solution.multiplicity > 1) os << "  solutions: " << c.solution.multiplicity;
        if (c.suspect) os << "  suspect";
        os << '\n';
        if (c.dual) os << "  dual " << c.dual->matrix.to_string() << "  c = " << fmt(c.dual->c) << "  [" << join(c.dual->labels, ", ") << "]\n";
    }
    os << "\n[non-unique] " << rep.non_unique.size() << '\n';
    for (const auto& r : rep.non_unique) {
        os << "A = " << r.A.to_string() << '\n';
        for (std::size_t i = 0; i < r.solutions.size(); ++i) {
            const auto& p = r.solutions[i];
            os << "  " << (static_cast<int>(i) == r.principal ? '*' : ' ') << " x = " << fmt(p.x) << "  y = " << fmt(p.y)
               << "  c = " << fmt(p.c);
            if (!p.labels.empty()) os << "  [" << join(p.labels, ", ") << "]";
            os << '\n';
        }
    }
    os << "\n[failures] " << rep.failures.size() << '\n';
    for (const auto& f : rep.failures) os << "A = " << f.A.to_string() << "  " << f.message << '\n';
    return os.str();
}

std::string format_json(const SearchReport& rep)
{
    using nlohmann::json;
    using detail::real_json;
    const double acc = detail::kSolverAccuracy;
    const auto& cfg = rep.config;
    json j;
    j["config"] = {
        {"max_denominator", cfg.max_denominator},
        {"max_numerator", cfg.max_numerator},
        {"diagonal", to_string(cfg.diagonal)},
        {"equal_diagonal", cfg.equal_diagonal},
        {"tolerance", cfg.tolerance},
        {"require_uniqueness", cfg.require_uniqueness},
    };
    const auto& s = rep.stats;
    j["stats"] = {{"enumerated", s.enumerated},     {"out_of_range", s.out_of_range}, {"pruned_by_bounds", s.pruned_by_bounds},
                  {"solved", s.solved},             {"boundary_only", s.boundary_only}, {"unrecognized", s.unrecognized},
                  {"suspects", s.suspects},         {"rejected_suspects", s.rejected_suspects}, {"non_unique", s.non_unique}};
    j["candidates"] = json::array();
    for (const auto& c : rep.candidates) {
        json e;
        e["matrix"] = detail::matrix_json(c.A);
        e["c"] = real_json(c.c, acc);
        e["matched"] = to_string(c.matched_value());
        e["labels"] = c.matches.labels();
        e["x"] = real_json(c.solution.x, acc);
        e["y"] = real_json(c.solution.y, acc);
        e["multiplicity"] = c.solution.multiplicity;
        e["classification"] = to_string(c.flags.classification);
        e["uniqueness_guaranteed"] = c.flags.uniqueness_guaranteed;
        if (c.flags.bounds)
            e["bounds"] = {{"lower", real_json(c.flags.bounds->lower, 1e-12)},
                           {"upper", real_json(c.flags.bounds->upper, 1e-12)},
                           {"case", to_string(c.flags.bounds->case_tag)}};
        e["suspect"] = c.suspect;
        if (c.dual)
            e["dual"] = {{"matrix", detail::matrix_json(c.dual->matrix)}, {"c", real_json(c.dual->c, acc)}, {"labels", c.dual->labels}};
        j["candidates"].push_back(std::move(e));
    }
    j["non_unique"] = json::array();
    for (const auto& r : rep.non_unique) {
        json e;
        e["matrix"] = detail::matrix_json(r.A);
        e["principal"] = r.principal;
        e["solutions"] = json::array();
        for (const auto& p : r.solutions)
            e["solutions"].push_back(
                {{"x", real_json(p.x, acc)}, {"y", real_json(p.y, acc)}, {"c", real_json(p.c, acc)}, {"labels", p.labels}});
        j["non_unique"].push_back(std::move(e));
    }
    j["failures"] = json::array();
    for (const auto& f : rep.failures) j["failures"].push_back({{"matrix", detail::matrix_json(f.A)}, {"message", f.message}});
    return j.dump(2) + "\n";
}

}  // namespace tbadilog

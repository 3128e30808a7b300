#include "tbadilog/tba.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "tbadilog/dilog.hpp"

namespace tbadilog {

RationalSymmetricMatrix RationalSymmetricMatrix::scaled(const Rational& s) const
{
    RationalSymmetricMatrix m(a * s, b * s, d * s);
    m.a_infinite = a_infinite;
    m.d_infinite = d_infinite;
    return m;
}

RationalSymmetricMatrix RationalSymmetricMatrix::swapped() const
{
    RationalSymmetricMatrix m(d, b, a);
    m.a_infinite = d_infinite;
    m.d_infinite = a_infinite;
    return m;
}

std::string RationalSymmetricMatrix::to_string() const
{
    std::ostringstream os;
    os << '(' << (a_infinite ? std::string("inf") : tbadilog::to_string(a)) << ' ' << tbadilog::to_string(b) << "; "
       << tbadilog::to_string(b) << ' ' << (d_infinite ? std::string("inf") : tbadilog::to_string(d)) << ')';
    return os.str();
}

RealSymmetricMatrix to_real(const RationalSymmetricMatrix& m)
{
    RealSymmetricMatrix r;
    r.a = to_double(m.a);
    r.b = to_double(m.b);
    r.d = to_double(m.d);
    r.a_infinite = m.a_infinite;
    r.d_infinite = m.d_infinite;
    return r;
}

double kappa(double t)
{
    if (std::isnan(t) || t < 0) throw std::domain_error("kappa requires t >= 0");
    if (t == 0) return 1.0;
    if (std::isinf(t)) return 0.0;
    // h(xi) = xi - (1-xi)^(2t) is increasing with h(0) = -1, h(1) = 1.
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        const double h = mid - std::exp(2 * t * std::log1p(-mid));
        if (h < 0)
            lo = mid;
        else if (h > 0)
            hi = mid;
        else
            return mid;
    }
    const double hlo = std::abs(lo - std::exp(2 * t * std::log1p(-lo)));
    const double hhi = std::abs(hi - std::exp(2 * t * std::log1p(-hi)));
    return hlo <= hhi ? lo : hi;
}

double kappa(const Rational& t)
{
    return kappa(to_double(t));
}

double delta_fn(double t)
{
    return rogers_L(kappa(t));
}

double delta_fn(const Rational& t)
{
    return delta_fn(to_double(t));
}

TbaSolution solve_r1(const Rational& a)
{
    if (a < 0) throw RangeError("rank-one coupling must be non-negative");
    TbaSolution s;
    s.rank = 1;
    const double ad = to_double(a);
    s.x = kappa(ad);
    s.residual = std::abs(s.x - std::pow(1.0 - s.x, 2 * ad));
    s.interior.push_back({s.x, 0.0});
    return s;
}

TbaSolution solve_r1_infinite()
{
    TbaSolution s;
    s.rank = 1;
    s.x = 0.0;
    s.interior.push_back({0.0, 0.0});
    return s;
}

namespace {

// ln T1 = e1y ln y + e1w ln(1-y),  ln T2 = e2y ln y + e2w ln(1-y).
// At a root T1 = 1 - x and T2 = x.
struct Reduced {
    double e1y, e1w, e2y, e2w;

    explicit Reduced(const RealSymmetricMatrix& m)
    {
        const double D = m.a * m.d - m.b * m.b;
        e1y = 1.0 / (2 * m.b);
        e1w = -m.d / m.b;
        e2y = m.a / m.b;
        e2w = -2 * D / m.b;
    }

    double log_t1(double ly, double lw) const { return e1y * ly + e1w * lw; }
    double log_t2(double ly, double lw) const { return e2y * ly + e2w * lw; }

    // f - 1, with the -1 absorbed by the larger term to keep the sign reliable.
    double g(double ly, double lw) const
    {
        const double l1 = log_t1(ly, lw);
        const double l2 = log_t2(ly, lw);
        if (l1 >= l2) return std::expm1(l1) + std::exp(l2);
        return std::exp(l1) + std::expm1(l2);
    }
};

struct ScanPoint {
    double z;   // logit(y)
    double ly;  // ln y
    double lw;  // ln(1-y)
};

ScanPoint from_logit(double z)
{
    return {z, -std::log1p(std::exp(-z)), -std::log1p(std::exp(z))};
}

double logistic(double z)
{
    return 1.0 / (1.0 + std::exp(-z));
}

std::vector<ScanPoint> build_grid(int n)
{
    std::vector<ScanPoint> pts;
    const double tail_step = 0.5;
    const double zmax = 700.0;
    const double z_first = std::log(1.0 / n) - std::log1p(-1.0 / n);
    for (double z = -zmax; z < z_first - tail_step / 2; z += tail_step) pts.push_back(from_logit(z));
    for (int i = 1; i < n; ++i) {
        const double y = static_cast<double>(i) / n;
        const double ly = std::log(y);
        const double lw = std::log1p(-y);
        pts.push_back({ly - lw, ly, lw});
    }
    const double z_last = pts.back().z;
    std::vector<ScanPoint> upper;
    for (double z = zmax; z > z_last + tail_step / 2; z -= tail_step) upper.push_back(from_logit(z));
    pts.insert(pts.end(), upper.rbegin(), upper.rend());
    return pts;
}

std::shared_ptr<const std::vector<ScanPoint>> grid_for(int n)
{
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const std::vector<ScanPoint>>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const std::vector<ScanPoint>>(build_grid(n));
    return slot;
}

double bisect_logit(const Reduced& f, double zlo, double zhi, double glo)
{
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = zlo + (zhi - zlo) / 2;
        if (mid <= zlo || mid >= zhi) break;
        const ScanPoint p = from_logit(mid);
        const double gm = f.g(p.ly, p.lw);
        if (gm == 0) return mid;
        if ((gm < 0) == (glo < 0))
            zlo = mid;
        else
            zhi = mid;
    }
    return zlo + (zhi - zlo) / 2;
}

double corner_pow(double base, double exponent)
{
    // base in {0,1}; a zero exponent gives 1 even at base 0.
    if (base == 1.0 || exponent == 0.0) return 1.0;
    return exponent > 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

bool corner_solves(const RealSymmetricMatrix& m, double x, double y)
{
    const double rx = corner_pow(1 - x, 2 * m.a) * corner_pow(1 - y, 2 * m.b);
    const double ry = corner_pow(1 - x, 2 * m.b) * corner_pow(1 - y, 2 * m.d);
    return rx == x && ry == y;
}

void check_range(const RealSymmetricMatrix& m, const SolveOptions& opts)
{
    if (std::isnan(m.a) || std::isnan(m.b) || std::isnan(m.d)) throw RangeError("matrix entry is NaN");
    if ((!m.a_infinite && m.a < 0) || (!m.d_infinite && m.d < 0)) throw RangeError("diagonal entries must be non-negative");
    if (opts.require_range && !m.a_infinite && !m.d_infinite && m.b < -std::min(m.a, m.d))
        throw RangeError("off-diagonal entry below -min(a,d)");
}

}  // namespace

double reduced_f(const RealSymmetricMatrix& m, double y)
{
    if (m.b == 0) throw std::domain_error("reduced equation undefined for b = 0");
    if (!(y > 0 && y < 1)) throw std::domain_error("reduced equation evaluated outside (0,1)");
    const Reduced f(m);
    const double ly = std::log(y);
    const double lw = std::log1p(-y);
    return std::exp(f.log_t1(ly, lw)) + std::exp(f.log_t2(ly, lw));
}

double reduced_f(const RationalSymmetricMatrix& m, double y)
{
    return reduced_f(to_real(m), y);
}

double tba_residual(const RealSymmetricMatrix& m, double x, double y)
{
    const double ux = 1 - x;
    const double uy = 1 - y;
    const double r1 = m.a_infinite ? x : x - std::pow(ux, 2 * m.a) * std::pow(uy, 2 * m.b);
    const double r2 = m.d_infinite ? y : y - std::pow(ux, 2 * m.b) * std::pow(uy, 2 * m.d);
    return std::max(std::abs(r1), std::abs(r2));
}

TbaSolution solve_r2(const RealSymmetricMatrix& m, const SolveOptions& opts)
{
    check_range(m, opts);
    TbaSolution s;
    s.rank = 2;

    if (m.a_infinite || m.d_infinite) {
        s.x = m.a_infinite ? 0.0 : kappa(m.a);
        s.y = m.d_infinite ? 0.0 : kappa(m.d);
        // A frozen variable sits at zero and drops out of the other equation.
        s.interior.push_back({s.x, s.y});
        s.residual = 0.0;
        if (!m.a_infinite) s.residual = std::abs(s.x - std::pow(1 - s.x, 2 * m.a));
        if (!m.d_infinite) s.residual = std::max(s.residual, std::abs(s.y - std::pow(1 - s.y, 2 * m.d)));
        return s;
    }

    if (m.b == 0) {
        s.x = kappa(m.a);
        s.y = kappa(m.d);
        s.interior.push_back({s.x, s.y});
        s.residual = tba_residual(m, s.x, s.y);
        return s;
    }

    if (m.b < 0 && m.a == -m.b && m.d == -m.b) {
        // Both equations collapse to x = y = kappa(a+b) = kappa(0).
        s.x = 1.0;
        s.y = 1.0;
        s.interior.push_back({1.0, 1.0});
        return s;
    }

    const Reduced f(m);
    const auto grid = grid_for(opts.grid_points);
    const auto& pts = *grid;

    // Exact zeros (usually underflow near the ends) count only when the sign
    // actually changes across them.
    std::vector<double> roots_z;
    double glast = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double gi = f.g(pts[i].ly, pts[i].lw);
        if (gi == 0 || std::isnan(gi)) continue;
        if (glast != 0 && (gi < 0) != (glast < 0)) {
            if (last + 1 == i)
                roots_z.push_back(bisect_logit(f, pts[last].z, pts[i].z, glast));
            else
                roots_z.push_back(pts[(last + i) / 2].z);
        }
        glast = gi;
        last = i;
    }

    for (double z : roots_z) {
        const ScanPoint p = from_logit(z);
        TbaPoint pt;
        pt.y = logistic(z);
        pt.x = std::clamp(1.0 - std::exp(f.log_t1(p.ly, p.lw)), 0.0, 1.0);
        s.interior.push_back(pt);
    }
    // Already ordered by increasing y since the grid is monotone in z.

    if (m.a == 0 && m.b > 0 && corner_solves(m, 1.0, 0.0)) s.boundary.push_back({1.0, 0.0});
    if (m.d == 0 && m.b > 0 && corner_solves(m, 0.0, 1.0)) s.boundary.push_back({0.0, 1.0});
    s.boundary_flag = !s.boundary.empty();

    if (!s.interior.empty()) {
        s.multiplicity = static_cast<int>(s.interior.size());
        s.x = s.interior.front().x;
        s.y = s.interior.front().y;
        s.residual = tba_residual(m, s.x, s.y);
    } else if (!s.boundary.empty()) {
        s.multiplicity = 0;
        s.principal_is_boundary = true;
        s.x = s.boundary.front().x;
        s.y = s.boundary.front().y;
        s.residual = 0.0;
    } else {
        throw NoSolutionError("no sign change of the reduced equation on (0,1)");
    }
    return s;
}

TbaSolution solve_r2(const RationalSymmetricMatrix& m, const SolveOptions& opts)
{
    return solve_r2(to_real(m), opts);
}

double c_of(const TbaSolution& s)
{
    if (s.rank == 1) return rogers_L(s.x);
    return rogers_L(s.x) + rogers_L(s.y);
}

double c_of(const RationalSymmetricMatrix& m, const SolveOptions& opts)
{
    return c_of(solve_r2(m, opts));
}

double c_of_r1(const Rational& a)
{
    return c_of(solve_r1(a));
}

}  // namespace tbadilog

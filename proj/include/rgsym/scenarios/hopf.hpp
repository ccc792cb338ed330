#pragma once
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rgsym/group/core.hpp"
#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/interpolation.hpp"
#include "rgsym/numerics/roots.hpp"

namespace rgsym {

enum class HopfProfileKind { linear, sine, tabulated };

// Boundary profile U(x) together with its inverse H where one exists.
class HopfProfile {
public:
    static HopfProfile linear() { return HopfProfile(HopfProfileKind::linear); }
    static HopfProfile sine() { return HopfProfile(HopfProfileKind::sine); }

    static HopfProfile tabulated(std::vector<double> xs, std::vector<double> us)
    {
        if (xs.size() != us.size() || xs.size() < 2)
            throw DomainError("hopf profile: need at least two (x, U) rows");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] > xs[i - 1]))
                throw DomainError("hopf profile: x must be strictly increasing");
        const bool inc = us[1] > us[0];
        for (std::size_t i = 1; i < us.size(); ++i)
            if (inc ? !(us[i] > us[i - 1]) : !(us[i] < us[i - 1]))
                throw DomainError("hopf profile: tabulated U must be strictly monotone");
        HopfProfile p(HopfProfileKind::tabulated);
        p.u_ = Pchip(xs, us);
        std::vector<double> uk = us, xk = xs;
        if (!inc) {
            std::reverse(uk.begin(), uk.end());
            std::reverse(xk.begin(), xk.end());
        }
        p.h_ = Pchip(uk, xk);
        return p;
    }

    HopfProfileKind kind() const { return kind_; }

    double x_lo() const { return kind_ == HopfProfileKind::tabulated ? u_.lo() : -inf(); }
    double x_hi() const { return kind_ == HopfProfileKind::tabulated ? u_.hi() : inf(); }

    double U(double x) const
    {
        switch (kind_) {
        case HopfProfileKind::linear: return x;
        case HopfProfileKind::sine: return -std::sin(x);
        case HopfProfileKind::tabulated: check_x(x); return u_(x);
        }
        return 0.0;
    }

    double dU(double x) const
    {
        switch (kind_) {
        case HopfProfileKind::linear: return 1.0;
        case HopfProfileKind::sine: return -std::cos(x);
        case HopfProfileKind::tabulated: check_x(x); return u_.derivative(x);
        }
        return 0.0;
    }

    // Global inverse; the sine profile has none (see hopf_solve for its branches).
    double H(double u) const
    {
        switch (kind_) {
        case HopfProfileKind::linear: return u;
        case HopfProfileKind::tabulated:
            if (u < h_.lo() || u > h_.hi())
                throw RootNotFound("hopf profile: value outside the tabulated range");
            return h_(u);
        case HopfProfileKind::sine: break;
        }
        throw DomainError("hopf profile: sine profile has no global inverse");
    }

    double min_dU() const
    {
        switch (kind_) {
        case HopfProfileKind::linear: return 1.0;
        case HopfProfileKind::sine: return -1.0;
        case HopfProfileKind::tabulated: return u_.min_derivative();
        }
        return 0.0;
    }

    double u_lo() const { return kind_ == HopfProfileKind::tabulated ? h_.lo() : -1.0; }
    double u_hi() const { return kind_ == HopfProfileKind::tabulated ? h_.hi() : 1.0; }

private:
    explicit HopfProfile(HopfProfileKind k) : kind_(k) {}
    static double inf() { return std::numeric_limits<double>::infinity(); }
    void check_x(double x) const
    {
        if (x < u_.lo() || x > u_.hi())
            throw RootNotFound("hopf profile: x outside the tabulated domain");
    }

    HopfProfileKind kind_;
    Pchip u_, h_;
};

// Two numeric columns (x, U); '#' starts a comment line.
inline HopfProfile load_tabulated_profile(std::istream& in)
{
    std::vector<double> xs, us;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream row(line);
        double x, u;
        std::string extra;
        if (!(row >> x >> u) || (row >> extra))
            throw ConfigError("hopf profile: malformed row at line " + std::to_string(lineno));
        xs.push_back(x);
        us.push_back(u);
    }
    return HopfProfile::tabulated(std::move(xs), std::move(us));
}

inline HopfProfile load_tabulated_profile(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("hopf profile: cannot open '" + path + "'");
    return load_tabulated_profile(f);
}

struct HopfGrid {
    double t0 = 0.0, t1 = 0.9;
    std::size_t nt = 64;
    double x0 = -std::numbers::pi, x1 = std::numbers::pi;
    std::size_t nx = 64;
};

struct HopfConfig {
    HopfProfile profile = HopfProfile::sine();
    double eps = 1.0;
    HopfGrid grid;

    void validate() const
    {
        if (!(eps > 0.0))
            throw ConfigError("hopf: eps must be positive");
    }
};

namespace detail {

inline Tolerance hopf_root_tol() { return {1e-15, 1e-15, 400}; }

// Roots of g on [lo, hi] located by a uniform sign scan and polished.
template <class G>
void scan_roots(G&& g, double lo, double hi, int cells, std::vector<double>& roots)
{
    double a = lo, ga = g(a);
    if (ga == 0.0)
        roots.push_back(a);
    for (int k = 1; k <= cells; ++k) {
        const double b = k == cells ? hi : lo + (hi - lo) * k / cells;
        const double gb = g(b);
        if (gb == 0.0)
            roots.push_back(b);
        else if (ga != 0.0 && detail::opposite(ga, gb))
            roots.push_back(find_root(g, {a, b}, hopf_root_tol()));
        a = b;
        ga = gb;
    }
}

inline void dedupe(std::vector<double>& v, double tol)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [tol](double a, double b) { return std::abs(a - b) <= tol; }), v.end());
}

} // namespace detail

// Root u of x - eps t u = H(u), by scanning u in 512 cells.
inline double hopf_solve(const HopfConfig& c, double t, double x)
{
    c.validate();
    const auto& P = c.profile;
    const double et = c.eps * t;
    constexpr int cells = 512;
    if (P.kind() == HopfProfileKind::sine) {
        // monotone branches x0 = j pi - (-1)^j asin(u), x0 in [j pi - pi/2, j pi + pi/2]
        std::vector<double> feet;
        const double reach = std::abs(et) + 1.0;
        const long j0 = static_cast<long>(std::floor((x - reach) / std::numbers::pi)) - 1;
        const long j1 = static_cast<long>(std::ceil((x + reach) / std::numbers::pi)) + 1;
        for (long j = j0; j <= j1; ++j) {
            const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
            const double base = static_cast<double>(j) * std::numbers::pi;
            auto g = [&](double u) { return x - et * u - (base - sgn * std::asin(u)); };
            std::vector<double> us;
            detail::scan_roots(g, -1.0, 1.0, cells, us);
            for (double u : us)
                feet.push_back(base - sgn * std::asin(u));
        }
        detail::dedupe(feet, 1e-9);
        if (feet.size() > 1)
            throw MultivaluedRegion("hopf_solve: implicit relation is multivalued at this point");
        if (feet.empty())
            throw RootNotFound("hopf_solve: no root of the implicit relation");
        return P.U(feet.front());
    }
    double lo, hi;
    if (P.kind() == HopfProfileKind::linear) {
        hi = std::abs(x) + 1.0;
        lo = -hi;
    } else {
        lo = P.u_lo();
        hi = P.u_hi();
    }
    auto g = [&](double u) { return x - et * u - P.H(u); };
    std::vector<double> us;
    detail::scan_roots(g, lo, hi, cells, us);
    detail::dedupe(us, 1e-12);
    if (us.size() > 1)
        throw MultivaluedRegion("hopf_solve: implicit relation is multivalued at this point");
    if (us.empty())
        throw RootNotFound("hopf_solve: no root of the implicit relation");
    return us.front();
}

inline double hopf_pt(const HopfConfig& c, double t, double x)
{
    c.validate();
    const double U = c.profile.U(x);
    return U - c.eps * t * U * c.profile.dU(x);
}

inline double hopf_singularity_time(const HopfConfig& c)
{
    c.validate();
    const double m = c.profile.min_dU();
    if (m < 0.0)
        return -1.0 / (c.eps * m);
    return std::numeric_limits<double>::infinity();
}

// u_x(t, 0) for U(x) = x
inline double hopf_axis_slope(double eps, double t)
{
    if (!(t >= 0.0))
        throw DomainError("hopf_axis_slope: t must be nonnegative");
    return 1.0 / (1.0 + eps * t);
}

inline double hopf_axis_invariant(double eps, double t, double u0x) { return eps * t - 1.0 / u0x; }

inline double hopf_axis_slope_pt(double eps, double t) { return 1.0 - eps * t; }

// R = d_eps - t (u0x)^2 d_u0x on {t, eps, u0x}
inline Generator hopf_axis_generator()
{
    VariableSpace s({"t", "eps", "u0x"});
    return Generator(s, {{"eps", [](const Point&) { return 1.0; }},
                         {"u0x", [](const Point& p) { return -p[0] * p[2] * p[2]; }}});
}

// RG flow in eps from the unperturbed value u0x = 1
inline double hopf_axis_slope_lie(double eps, double t, const Tolerance& tol = default_lie_tolerance())
{
    return lie_flow(hopf_axis_generator(), {t, 0.0, 1.0}, eps, tol)[2];
}

// Generators on {t, x, eps, u}
inline Generator hopf_r1()
{
    VariableSpace s({"t", "x", "eps", "u"});
    return Generator(s, {{"t", [](const Point&) { return 1.0; }}, {"x", [](const Point& p) { return p[2] * p[3]; }}});
}

inline Generator hopf_r2(const HopfProfile& prof)
{
    VariableSpace s({"t", "x", "eps", "u"});
    auto slope = [prof](const Point& p) {
        const double chi = p[1] - p[2] * p[3] * p[0];
        return prof.dU(chi);
    };
    return Generator(s, {{"x", [slope](const Point& p) { return p[3] * (p[2] * p[0] + 1.0 / slope(p)); }},
                         {"u", [](const Point& p) { return p[3]; }}});
}

inline Generator hopf_r3()
{
    VariableSpace s({"t", "x", "eps", "u"});
    return Generator(s, {{"x", [](const Point& p) { return p[0] * p[3]; }}, {"eps", [](const Point&) { return 1.0; }}});
}

// Straight characteristics x = x0 + eps t U(x0), inverted per target.
inline std::vector<double> hopf_characteristics_oracle(const HopfConfig& c, double t, const std::vector<double>& x_targets)
{
    c.validate();
    const auto& P = c.profile;
    const double et = c.eps * t;
    auto map = [&](double x0) { return x0 + et * P.U(x0); };
    std::vector<double> feet, out;
    feet.reserve(x_targets.size());
    for (double x : x_targets) {
        auto f = [&](double x0) { return map(x0) - x; };
        Bracket br;
        if (P.kind() == HopfProfileKind::tabulated) {
            br = {P.x_lo(), P.x_hi()};
            const double flo = f(br.lo), fhi = f(br.hi);
            if (flo != 0.0 && fhi != 0.0 && !detail::opposite(flo, fhi))
                throw RootNotFound("characteristics oracle: target outside the tabulated image");
        } else {
            br = expand_bracket(f, x - 0.5, x + 0.5);
        }
        feet.push_back(find_root(f, br, detail::hopf_root_tol()));
    }
    if (!feet.empty()) {
        // the map must be increasing over the hull of the feet
        double lo = *std::min_element(feet.begin(), feet.end()), hi = *std::max_element(feet.begin(), feet.end());
        lo = std::max(lo - 1.0, P.x_lo());
        hi = std::min(hi + 1.0, P.x_hi());
        const int n = 4096;
        double prev = map(lo);
        for (int k = 1; k <= n; ++k) {
            const double cur = map(lo + (hi - lo) * k / n);
            if (!(cur > prev))
                throw CharacteristicCrossing("characteristics oracle: characteristics cross before this time");
            prev = cur;
        }
    }
    for (double x0 : feet)
        out.push_back(P.U(x0));
    return out;
}

// u_t + eps u u_x at one point by central differences
inline double hopf_pde_residual(const HopfConfig& c, double t, double x, double h = 1e-5)
{
    const double ut = (hopf_solve(c, t + h, x) - hopf_solve(c, t - h, x)) / (2.0 * h);
    const double ux = (hopf_solve(c, t, x + h) - hopf_solve(c, t, x - h)) / (2.0 * h);
    return ut + c.eps * hopf_solve(c, t, x) * ux;
}

// max over the x samples of |u_x| by central differences
inline double hopf_max_gradient(const HopfConfig& c, double t, const std::vector<double>& xs, double h = 1e-7)
{
    double m = 0.0;
    for (double x : xs)
        m = std::max(m, std::abs(hopf_solve(c, t, x + h) - hopf_solve(c, t, x - h)) / (2.0 * h));
    return m;
}

struct GradientBlowup {
    double t_detected;
    double t_predicted;
    double rel_error;
};

// First time at which the sampled gradient exceeds the threshold.
inline GradientBlowup detect_gradient_blowup(const HopfConfig& c, const std::vector<double>& xs, double t_max,
                                             double threshold = 1e3)
{
    auto exceeded = [&](double t) {
        try {
            return hopf_max_gradient(c, t, xs) >= threshold;
        } catch (const MultivaluedRegion&) {
            return true;
        }
    };
    if (!exceeded(t_max))
        throw NoSingularity("gradient blowup: threshold not reached before t_max");
    double lo = 0.0, hi = t_max;
    if (exceeded(lo))
        throw DomainError("gradient blowup: threshold exceeded at t = 0");
    for (int k = 0; k < 60 && hi - lo > 1e-12 * t_max; ++k) {
        const double mid = 0.5 * (lo + hi);
        (exceeded(mid) ? hi : lo) = mid;
    }
    GradientBlowup g;
    g.t_detected = hi;
    g.t_predicted = hopf_singularity_time(c);
    g.rel_error = std::abs(g.t_detected - g.t_predicted) / g.t_predicted;
    return g;
}

} // namespace rgsym

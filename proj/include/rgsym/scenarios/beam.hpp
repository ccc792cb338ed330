#pragma once
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "rgsym/group/core.hpp"
#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/interpolation.hpp"
#include "rgsym/numerics/ode.hpp"
#include "rgsym/numerics/roots.hpp"

namespace rgsym {

enum class BeamProfile { gaussian, binomial };

struct BeamConfig {
    double alpha = 1.0;
    double beta = 0.5;
    int nu = 1;
    BeamProfile profile = BeamProfile::gaussian;
    double s0 = 1.0, s2 = 0.0; // binomial S = s0 + s2 chi^2 / 2
    double chi_max = 4.0;      // fan extent
    std::size_t n_fan = 161;

    void validate() const
    {
        if (!(alpha >= 0.0) || !(beta >= 0.0))
            throw ConfigError("beam: alpha and beta must be nonnegative");
        if (profile == BeamProfile::gaussian && alpha == 0.0 && beta == 0.0)
            throw ConfigError("beam: alpha and beta cannot both vanish");
        if (nu != 0 && nu != 1)
            throw ConfigError("beam: nu must be 0 or 1");
        if (!(chi_max > 0.0) || n_fan < 5)
            throw ConfigError("beam: fan needs chi_max > 0 and at least five rays");
    }

    double intensity(double chi) const
    {
        if (profile == BeamProfile::gaussian)
            return std::exp(-chi * chi);
        if (beta == 0.0 && alpha > 0.0) {
            // refraction only: alpha N = S
            const double n = (s0 + 0.5 * s2 * chi * chi) / alpha;
            if (!(n > 0.0))
                throw DomainError("beam: binomial intensity is not positive here");
            return n;
        }
        // with diffraction the matching intensity solves a Townes-type problem; the orbits scale linearly in n
        return 1.0;
    }
};

// S and its derivatives; even in chi.
struct SProfile {
    std::function<double(double)> S, dS, d2S;
    double d2S_axis = 0.0;      // S_chichi(0)
    double dS_over_chi_axis = 0.0; // lim S_chi / chi

    // S_chi / chi with the analytic axis limit
    double dS_over_chi(double chi) const { return chi == 0.0 ? dS_over_chi_axis : dS(chi) / chi; }
};

inline SProfile build_s_profile(const BeamConfig& cfg)
{
    cfg.validate();
    SProfile p;
    if (cfg.profile == BeamProfile::binomial) {
        const double s0 = cfg.s0, s2 = cfg.s2;
        p.S = [s0, s2](double c) { return s0 + 0.5 * s2 * c * c; };
        p.dS = [s2](double c) { return s2 * c; };
        p.d2S = [s2](double) { return s2; };
        p.d2S_axis = s2;
        p.dS_over_chi_axis = s2;
        return p;
    }
    // N = exp(-chi^2): S = alpha N + beta (chi^2 - 1 - nu)
    const double a = cfg.alpha, b = cfg.beta, k = 1.0 + cfg.nu;
    p.S = [a, b, k](double c) { return a * std::exp(-c * c) + b * (c * c - k); };
    p.dS = [a, b](double c) { return -2.0 * a * c * std::exp(-c * c) + 2.0 * b * c; };
    p.d2S = [a, b](double c) { return a * (4.0 * c * c - 2.0) * std::exp(-c * c) + 2.0 * b; };
    p.d2S_axis = -2.0 * (a - b);
    p.dS_over_chi_axis = -2.0 * (a - b);
    return p;
}

// S from sampled intensity by central differences; independent check of the closed forms.
inline double s_from_intensity(const std::function<double(double)>& N, double alpha, double beta, int nu, double chi,
                               double h = 1e-3)
{
    auto q = [&](double c) {
        const double n = N(c);
        if (!(n > 0.0))
            throw DomainError("s_from_intensity: intensity must be positive");
        return std::sqrt(n);
    };
    const double qm2 = q(chi - 2 * h), qm = q(chi - h), q0 = q(chi), qp = q(chi + h), qp2 = q(chi + 2 * h);
    const double d1 = (qm2 - 8 * qm + 8 * qp - qp2) / (12 * h);
    const double d2 = (-qm2 + 16 * qm - 30 * q0 + 16 * qp - qp2) / (12 * h * h);
    double lap = d2;
    if (nu == 1)
        lap += chi == 0.0 ? d2 : d1 / chi; // axis: q'/chi -> q''(0)
    return alpha * q0 * q0 + beta * lap / q0;
}

// Point symmetry on {t, x, v, n}; S evaluated at chi = x - v t.
inline Generator beam_generator(const BeamConfig& cfg)
{
    const SProfile s = build_s_profile(cfg);
    const int nu = cfg.nu;
    VariableSpace sp({"t", "x", "v", "n"});
    auto chi = [](const Point& p) { return p[1] - p[2] * p[0]; };
    return Generator(
        sp, {{"t", [s, chi](const Point& p) { return 1.0 + p[0] * p[0] * s.d2S(chi(p)); }},
             {"x",
              [s, chi](const Point& p) {
                  const double c = chi(p);
                  return p[0] * s.dS(c) + p[2] * p[0] * p[0] * s.d2S(c);
              }},
             {"v", [s, chi](const Point& p) { return s.dS(chi(p)); }},
             {"n", [s, chi, nu](const Point& p) {
                  const double t = p[0], x = p[1], v = p[2], n = p[3], c = chi(p);
                  double br = s.d2S(c);
                  if (nu == 1)
                      br = x == 0.0 ? 2.0 * s.d2S_axis : (1.0 + v * t / x) * s.d2S(c) + s.dS(c) / x;
                  return -n * t * br;
              }}});
}

inline Point beam_start(const BeamConfig& cfg, double chi0) { return {0.0, chi0, 0.0, cfg.intensity(chi0)}; }

inline OrbitTrace integrate_beam_orbit(const BeamConfig& cfg, double chi0, double a_max,
                                       const Tolerance& tol = default_lie_tolerance(),
                                       const LieEvent* event = nullptr)
{
    return integrate_lie(beam_generator(cfg), beam_start(cfg, chi0), a_max, tol, event);
}

inline constexpr double beam_blowup_factor = 1e6;

// On-axis intensity 1 / (1 + S_chichi(0) t^2); nu = 0 gives the square root of it.
inline double beam_axis_density(const BeamConfig& cfg, double t)
{
    const double d = 1.0 + build_s_profile(cfg).d2S_axis * t * t;
    if (!(d > 0.0))
        throw CausticCrossed("beam: axis intensity past the singularity");
    return cfg.intensity(0.0) * (cfg.nu == 1 ? 1.0 / d : 1.0 / std::sqrt(d));
}

inline double beam_singularity_predicted(const BeamConfig& cfg)
{
    const double s2 = build_s_profile(cfg).d2S_axis;
    if (!(s2 < 0.0))
        throw NoSingularity("beam: no focusing singularity (requires alpha > beta)");
    return 1.0 / std::sqrt(-s2);
}

// Group parameter at which the axis orbit reaches the blow-up threshold.
inline double beam_axis_param_bound(const BeamConfig& cfg, double factor)
{
    // t = t_s tanh(a / t_s) and n = cosh^2(a / t_s) on the axis
    const double ts = beam_singularity_predicted(cfg);
    return 3.0 * ts * std::acosh(std::sqrt(factor)) + 1.0;
}

// t at which the on-axis intensity first exceeds factor * N(0) along the orbit.
inline double beam_singularity_time(const BeamConfig& cfg, const Tolerance& tol = default_lie_tolerance(),
                                    double factor = beam_blowup_factor)
{
    cfg.validate();
    const double s2 = build_s_profile(cfg).d2S_axis;
    if (!(s2 < 0.0))
        throw NoSingularity("beam: no focusing singularity (requires alpha > beta)");
    const double n_cut = factor * cfg.intensity(0.0);
    LieEvent ev{"blowup", [n_cut](const Point& p) { return n_cut - p[3]; }};
    const auto tr = integrate_beam_orbit(cfg, 0.0, beam_axis_param_bound(cfg, 100.0 * factor), tol, &ev);
    if (!tr.terminal_event)
        throw NoSingularity("beam: blow-up threshold not reached");
    return tr.terminal_event->state[0];
}

// State of the orbit from chi0 when its t-component reaches t.
inline Point beam_orbit_at_time(const BeamConfig& cfg, double chi0, double t,
                                const Tolerance& tol = default_lie_tolerance())
{
    if (t == 0.0)
        return beam_start(cfg, chi0);
    if (!(t > 0.0))
        throw DomainError("beam: t must be nonnegative");
    LieEvent ev{"t", [t](const Point& p) { return t - p[0]; }};
    // dt/da >= 1 + t^2 min S_chichi stays positive before the singularity
    const double a_max = 20.0 * (1.0 + t) + 50.0;
    const auto tr = integrate_beam_orbit(cfg, chi0, a_max, tol, &ev);
    if (!tr.terminal_event)
        throw CausticCrossed("beam: orbit does not reach the requested t");
    Point p = tr.terminal_event->state;
    p[0] = t;
    return p;
}

struct BeamField {
    double t = 0.0;
    std::vector<double> x, n, v;
    double min_jacobian = 0.0; // min over the fan of dx / dchi0
};

struct BeamFan {
    std::vector<double> chi0, x, v, n;
    double min_jacobian = 0.0;
};

inline BeamFan beam_fan(const BeamConfig& cfg, double t, const Tolerance& tol = default_lie_tolerance())
{
    cfg.validate();
    BeamFan f;
    const std::size_t m = cfg.n_fan;
    f.chi0.resize(m);
    f.x.resize(m);
    f.v.resize(m);
    f.n.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double c = cfg.chi_max * static_cast<double>(i) / static_cast<double>(m - 1);
        const auto p = beam_orbit_at_time(cfg, c, t, tol);
        f.chi0[i] = c;
        f.x[i] = p[1];
        f.v[i] = p[2];
        f.n[i] = p[3];
    }
    f.min_jacobian = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < m; ++i)
        f.min_jacobian = std::min(f.min_jacobian, (f.x[i + 1] - f.x[i]) / (f.chi0[i + 1] - f.chi0[i]));
    return f;
}

// (n, v) at time t on x_targets, from the mirrored fan and natural splines.
inline BeamField beam_field(const BeamConfig& cfg, double t, const std::vector<double>& x_targets,
                            const Tolerance& tol = default_lie_tolerance())
{
    const auto fan = beam_fan(cfg, t, tol);
    if (!(fan.min_jacobian > 0.0))
        throw CausticCrossed("beam_field: the chi0 -> x map lost monotonicity");
    const std::size_t m = fan.x.size();
    std::vector<double> xs, ns, vs;
    xs.reserve(2 * m - 1);
    for (std::size_t i = m; i-- > 1;) {
        xs.push_back(-fan.x[i]);
        ns.push_back(fan.n[i]);
        vs.push_back(-fan.v[i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
        xs.push_back(fan.x[i]);
        ns.push_back(fan.n[i]);
        vs.push_back(fan.v[i]);
    }
    const CubicSpline sn(xs, ns), sv(xs, vs);
    BeamField out;
    out.t = t;
    out.min_jacobian = fan.min_jacobian;
    for (double x : x_targets) {
        if (std::abs(x) > fan.x.back())
            throw DomainError("beam_field: target outside the fan");
        out.x.push_back(x);
        // evaluate on |x| and apply the parity so that outputs are exactly even / odd
        out.n.push_back(sn(std::abs(x)));
        out.v.push_back(x < 0.0 ? -sv(-x) : sv(x));
    }
    return out;
}

// First t where the fan Jacobian min dx/dchi0 falls to jac_floor; bisection on t.
inline double beam_jacobian_crossing(const BeamConfig& cfg, double jac_floor = 1e-3, double t_tol = 1e-4)
{
    const double ts = beam_singularity_predicted(cfg);
    auto jac = [&](double t) {
        try {
            return beam_fan(cfg, t).min_jacobian;
        } catch (const CausticCrossed&) {
            return -1.0;
        }
    };
    double lo = 0.0, hi = 1.5 * ts;
    if (jac(hi) > jac_floor)
        throw NoSingularity("beam: Jacobian stays positive");
    while (hi - lo > t_tol) {
        const double mid = 0.5 * (lo + hi);
        (jac(mid) > jac_floor ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Pointwise solution: root find in chi0 so that the orbit lands on x at time t.
inline std::pair<double, double> beam_point(const BeamConfig& cfg, double t, double x,
                                            const Tolerance& tol = default_lie_tolerance())
{
    if (t == 0.0)
        return {0.0, cfg.intensity(x)};
    const double sgn = x < 0.0 ? -1.0 : 1.0, ax = std::abs(x);
    if (ax == 0.0) {
        const auto p = beam_orbit_at_time(cfg, 0.0, t, tol);
        return {0.0, p[3]};
    }
    auto g = [&](double c) { return beam_orbit_at_time(cfg, c, t, tol)[1] - ax; };
    double hi = std::max(2.0 * ax, 0.5);
    const double c = find_root(g, expand_bracket(g, 0.0, hi), {1e-15, 1e-15, 200});
    const auto p = beam_orbit_at_time(cfg, c, t, tol);
    return {sgn * p[2], p[3]};
}

inline SolutionSampler beam_sampler(const BeamConfig& cfg, double h = 1e-3)
{
    SolutionSampler s;
    s.independent = {"t", "x"};
    s.dependent = {"v", "n"};
    s.steps = {h, h};
    s.order = 4;
    s.evaluate = [cfg](const std::vector<double>& p) {
        if (p[0] < 0.0)
            throw DomainError("beam: t < 0");
        const auto [v, n] = beam_point(cfg, p[0], p[1]);
        return std::vector<double>{v, n};
    };
    return s;
}

// f and g coordinates of the canonical operator at (t, x), nu = 1.
struct CanonicalCoords {
    double f, g;
};

inline CanonicalCoords beam_canonical_coords(const BeamConfig& cfg, double t, double x, double h = 0.02)
{
    if (cfg.nu != 1)
        throw DomainError("beam_canonical_coords: cylindrical case only");
    if (!(std::abs(x) > 4.0 * h))
        throw StencilOutOfDomain("beam_canonical_coords: stencil crosses the axis");
    const SProfile s = build_s_profile(cfg);
    double q[7], n[7], v[7], xs[7];
    for (int k = -3; k <= 3; ++k) {
        xs[k + 3] = x + k * h;
        const auto [vv, nn] = beam_point(cfg, t, xs[k + 3]);
        v[k + 3] = vv;
        n[k + 3] = nn;
        q[k + 3] = std::sqrt(nn);
    }
    auto d1 = [h](const double* a) { return (a[1] - 8 * a[2] + 8 * a[4] - a[5]) / (12 * h); };
    auto d2 = [h](const double* a) { return (-a[1] + 16 * a[2] - 30 * a[3] + 16 * a[4] - a[5]) / (12 * h * h); };
    auto d3 = [h](const double* a) { return (a[0] - 8 * a[1] + 13 * a[2] - 13 * a[4] + 8 * a[5] - a[6]) / (8 * h * h * h); };
    const double q0 = q[3], q1 = d1(q), q2 = d2(q), q3 = d3(q);
    const double v1 = d1(v), n1 = d1(n);
    // Q = (q' / x + q'') / q, the diffraction term
    const double Qx = (q2 / x - q1 / (x * x) + q3) / q0 - (q1 / x + q2) * q1 / (q0 * q0);
    const double chi = x - v[3] * t;
    const double f = s.dS(chi) * (1.0 - t * v1) - cfg.alpha * n1 - cfg.beta * Qx;
    double w[7];
    for (int k = 0; k < 7; ++k)
        w[k] = xs[k] * n[k] * (v[k] - t * s.dS(xs[k] - v[k] * t));
    const double g = d1(w) / x;
    return {f, g};
}

// Residual of the beam system (nu in {0, 1}) at (t, x) by central differences of the pointwise solution.
inline std::pair<double, double> beam_pde_residual(const BeamConfig& cfg, double t, double x, double h = 0.02)
{
    const int nu = cfg.nu;
    if (nu == 1 && !(std::abs(x) > 4.0 * h))
        throw StencilOutOfDomain("beam_pde_residual: stencil crosses the axis");
    if (!(t > 2.0 * h))
        throw StencilOutOfDomain("beam_pde_residual: stencil crosses t = 0");
    double q[7], n[7], v[7];
    for (int k = -3; k <= 3; ++k) {
        const auto [vv, nn] = beam_point(cfg, t, x + k * h);
        v[k + 3] = vv;
        n[k + 3] = nn;
        q[k + 3] = std::sqrt(nn);
    }
    double vt[5], nt[5];
    for (int k = -2; k <= 2; ++k) {
        const auto [vv, nn] = k == 0 ? std::pair{v[3], n[3]} : beam_point(cfg, t + k * h, x);
        vt[k + 2] = vv;
        nt[k + 2] = nn;
    }
    auto d1 = [h](const double* a) { return (a[1] - 8 * a[2] + 8 * a[4] - a[5]) / (12 * h); };
    auto d2 = [h](const double* a) { return (-a[1] + 16 * a[2] - 30 * a[3] + 16 * a[4] - a[5]) / (12 * h * h); };
    auto d3 = [h](const double* a) { return (a[0] - 8 * a[1] + 13 * a[2] - 13 * a[4] + 8 * a[5] - a[6]) / (8 * h * h * h); };
    auto dt = [h](const double* a) { return (a[0] - 8 * a[1] + 8 * a[3] - a[4]) / (12 * h); };
    const double q0 = q[3], q1 = d1(q), q2 = d2(q), q3 = d3(q);
    double Qx;
    if (nu == 1)
        Qx = (q2 / x - q1 / (x * x) + q3) / q0 - (q1 / x + q2) * q1 / (q0 * q0);
    else
        Qx = q3 / q0 - q2 * q1 / (q0 * q0);
    const double v0 = v[3], n0 = n[3], vx = d1(v), nx = d1(n);
    const double r1 = dt(vt) + v0 * vx - cfg.alpha * nx - cfg.beta * Qx;
    const double r2 = dt(nt) + n0 * vx + v0 * nx + (nu == 1 ? n0 * v0 / x : 0.0);
    return {r1, r2};
}

} // namespace rgsym

#pragma once
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "rgsym/group/core.hpp"
#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/ode.hpp"
#include "rgsym/numerics/roots.hpp"
#include "rgsym/numerics/special.hpp"
#include "rgsym/oracles/residual.hpp"

namespace rgsym {

enum class ChaplyginProfile { soliton, gaussian };

struct ChaplyginConfig {
    double alpha = 1.0;
    Nonlinearity phi = Nonlinearity::unity;
    ChaplyginProfile profile = ChaplyginProfile::soliton;

    void validate() const
    {
        if (alpha == 0.0)
            throw ConfigError("chaplygin: alpha must be nonzero");
    }
};

struct DensityVelocity {
    double n;
    double v;
};

inline Tolerance chaplygin_root_tol() { return {1e-15, 1e-15, 400}; }

// ---- soliton profile N = 1/cosh^2, alpha = 1, phi = 1 ----

// smaller root of t^2 n^2 - n cosh^2(chi) + 1 = 0
inline double soliton_density_at(double t, double chi)
{
    const double c2 = std::pow(std::cosh(chi), 2);
    const double disc = c2 * c2 - 4.0 * t * t;
    if (disc < 0.0)
        throw BranchLoss("soliton: density branch lost (complex root)");
    return 2.0 / (c2 + std::sqrt(disc));
}

inline DensityVelocity soliton_solution(double t, double x, const Tolerance& tol = chaplygin_root_tol())
{
    if (!(std::abs(t) <= 0.5))
        throw BranchLoss("soliton: no continuous branch past t = 1/2");
    if (!std::isfinite(x))
        throw DomainError("soliton: x must be finite");
    const double t2 = t * t;
    auto G = [&](double chi) { return chi - 2.0 * t2 * soliton_density_at(t, chi) * std::tanh(chi) - x; };
    const double chi = find_root(G, {x - 1.01, x + 1.01}, tol);
    const double n = soliton_density_at(t, chi);
    return {n, -2.0 * n * t * std::tanh(chi)};
}

// Damped fixed-point iteration continued in t from the boundary data.
inline DensityVelocity soliton_continuation(double t, double x, double dt = 1e-3, double relax = 0.5)
{
    if (!(t >= 0.0 && t <= 0.5))
        throw BranchLoss("soliton continuation: t outside [0, 1/2]");
    double v = 0.0, n = 1.0 / std::pow(std::cosh(x), 2);
    const int steps = static_cast<int>(std::ceil(t / dt));
    for (int k = 1; k <= steps; ++k) {
        const double tk = std::min(t, k * dt);
        int it = 0;
        for (; it < 20000; ++it) {
            const double chi = x - v * tk;
            const double n_new = soliton_density_at(tk, chi);
            const double v_new = -2.0 * n_new * tk * std::tanh(chi);
            const double dv = v_new - v;
            v += relax * dv;
            n = n_new;
            if (std::abs(dv) <= 1e-15 * (1.0 + std::abs(v)))
                break;
        }
        if (it == 20000)
            throw BranchLoss("soliton continuation: iteration stalled");
    }
    n = soliton_density_at(t, x - v * t);
    return {n, v};
}

// ---- slab profile N = exp(-x^2), alpha = -1, phi = 1/n ----

inline double slab_time_of_q(double q) { return 0.5 * std::sqrt(std::numbers::pi) * erfi(q / std::numbers::sqrt2); }

inline double slab_q_of_time(double t, const Tolerance& tol = chaplygin_root_tol())
{
    const double qmax = 5.0;
    const double tmax = slab_time_of_q(qmax);
    if (std::abs(t) > tmax)
        throw DomainError("slab: t beyond the q = 5 cap");
    if (t == 0.0)
        return 0.0;
    const double q = find_root([&](double s) { return slab_time_of_q(s) - std::abs(t); }, {0.0, qmax}, tol);
    return t < 0.0 ? -q : q;
}

inline DensityVelocity slab_from_q(double q, double x)
{
    const double e = std::exp(-0.5 * q * q);
    return {e * std::exp(-x * x * e * e), x * std::numbers::sqrt2 * q * e};
}

inline DensityVelocity slab_solution(double t, double x, const Tolerance& tol = chaplygin_root_tol())
{
    return slab_from_q(slab_q_of_time(t, tol), x);
}

// ---- on-axis density of the soliton case ----

inline double onaxis_density(double t)
{
    if (!(t >= 0.0) || t > 0.5)
        throw DomainError("onaxis_density: t must lie in [0, 1/2]");
    if (t == 0.5)
        return 2.0;
    auto g = [t](double n) { return std::sqrt(n - 1.0) / n - t; };
    return find_root(g, {1.0, 2.0}, chaplygin_root_tol());
}

inline double onaxis_density_closed(double t) { return 2.0 / (1.0 + std::sqrt(1.0 - 4.0 * t * t)); }

// 4 - 5n - t n_t + 2(n-1) n n_tt / n_t^2
inline double onaxis_kappa(double t, double n, double nt, double ntt)
{
    return 4.0 - 5.0 * n - t * nt + 2.0 * (n - 1.0) * n * ntt / (nt * nt);
}

// kappa = 0 as an ODE for m = n - 1, started from the small-t series with n_t / sqrt(n - 1) -> 2.
inline OdeSolution<std::array<double, 2>> onaxis_density_ode(double t_end, const Tolerance& tol = {1e-12, 1e-12, 200},
                                                             double t0 = 1e-3)
{
    if (!(t_end > t0) || t_end >= 0.5)
        throw DomainError("onaxis_density_ode: t_end must lie in (t0, 1/2)");
    auto rhs = [](double t, const std::array<double, 2>& y) {
        const double m = y[0], mt = y[1], n = 1.0 + m;
        return std::array<double, 2>{mt, (5.0 * n - 4.0 + t * mt) * mt * mt / (2.0 * m * n)};
    };
    const std::array<double, 2> y0{t0 * t0 + 2.0 * std::pow(t0, 4), 2.0 * t0 + 8.0 * std::pow(t0, 3)};
    return integrate_ode(rhs, y0, t0, t_end, OdeOptions::from(tol));
}

inline double onaxis_density_ode_value(double t, const Tolerance& tol = {1e-12, 1e-12, 200})
{
    if (t <= 1e-3)
        return 1.0 + t * t + 2.0 * std::pow(t, 4);
    return 1.0 + onaxis_density_ode(t, tol).final_state[0];
}

// ---- PDE residual of the kcs system at one point ----

template <class Sol>
std::array<double, 2> kcs_point_residual(Sol&& sol, double t, double x, double alpha, Nonlinearity phi, double h = 1e-5)
{
    const auto c = sol(t, x), tp = sol(t + h, x), tm = sol(t - h, x), xp = sol(t, x + h), xm = sol(t, x - h);
    const double vt = (tp.v - tm.v) / (2 * h), nt = (tp.n - tm.n) / (2 * h);
    const double vx = (xp.v - xm.v) / (2 * h), nx = (xp.n - xm.n) / (2 * h);
    const double ph = phi == Nonlinearity::unity ? 1.0 : 1.0 / c.n;
    return {vt + c.v * vx - alpha * ph * nx, nt + c.v * nx + c.n * vx};
}

// ---- hodograph jets and Lie-Backlund coordinates ----

struct HodographPoint {
    double tau = 0.0, chi = 0.0, n = 0.0, v = 0.0;
};

struct HodographJet {
    HodographPoint p;
    double tau_n = 0.0, chi_n = 0.0, tau_nn = 0.0, chi_nn = 0.0;
    double tau_a = 0.0, chi_a = 0.0; // alpha-derivatives at fixed (n, w)
};

enum class LbCase { soliton, slab, slab_published, f0g0_f1g1, gauss1, gauss2 };

struct LbCoords {
    double f, g;
};

inline LbCoords liebacklund_coords(LbCase c, const HodographJet& j, double alpha = 1.0)
{
    const double n = j.p.n, v = j.p.v, T = j.p.tau, C = j.p.chi;
    const double t1 = j.tau_n, c1 = j.chi_n, t2 = j.tau_nn, c2 = j.chi_nn;
    switch (c) {
    case LbCase::soliton:
        return {2 * n * (1 - n) * t2 - n * t1 - 2 * n * v * (c1 + n * c2) + n * v * v * t2 / 2,
                2 * n * (1 - n) * c2 + (2 - 3 * n) * c1 + v * (2 * n * t2 + t1) + (v * v / 2) * (n * c2 + c1)};
    case LbCase::slab:
    case LbCase::slab_published: {
        const double L = std::log(n);
        const double mid = (n / 2) * (1 + 4 * L) * c1;
        return {-n * n * L * t2 - (n / 2) * t1 + T / 2 + v * (n * n * n * c2 + 1.5 * n * n * c1),
                -n * n * L * c2 + (c == LbCase::slab ? -mid : mid) + C / 2 + v * (n * t2 + t1 / 2)};
    }
    case LbCase::f0g0_f1g1: {
        const double w = v / alpha;
        const double f0 = 2 * n * (1 - n) * t2 - n * t1 - 2 * n * w * (c1 + n * c2);
        const double g0 = 2 * n * (1 - n) * c2 + (2 - 3 * n) * c1;
        const double f1 = n * w * w * t2 / 2;
        const double g1 = w * (2 * n * t2 + t1) + (w * w / 2) * (n * c2 + c1);
        return {f0 + alpha * f1, g0 + alpha * g1};
    }
    case LbCase::gauss1:
        return {1 + 2 * n * C * c1 + alpha * (-2 * T * t1 + T * T / n), -2 * alpha * (T * c1 + C * t1)};
    case LbCase::gauss2:
        return {2 * n * (T * c1 + t1 * C) + 2 * alpha * C * j.tau_a,
                1 + 2 * n * C * c1 + 2 * alpha * (C * j.chi_a - T * t1)};
    }
    throw DomainError("liebacklund_coords: unknown case");
}

// Sampler of tau(n, v), chi(n, v) obtained by inverting a physical solution (t, x) -> (n, v)
// with 2x2 Newton, warm-started at (t0, x0).
template <class Sol>
SolutionSampler hodograph_sampler(Sol sol, double t0, double x0, double hn = 1e-3)
{
    SolutionSampler s;
    s.independent = {"n", "v"};
    s.dependent = {"tau", "chi"};
    s.steps = {hn, hn};
    s.order = 4;
    s.evaluate = [sol, t0, x0](const std::vector<double>& nv) {
        const double n = nv[0], v = nv[1];
        double t = t0, x = x0;
        const double d = 1e-7;
        for (int it = 0; it < 60; ++it) {
            const auto c = sol(t, x);
            const double r0 = c.n - n, r1 = c.v - v;
            if (std::abs(r0) < 1e-14 && std::abs(r1) < 1e-14)
                return std::vector<double>{n * t, x - v * t};
            const auto tp = sol(t + d, x), tm = sol(t - d, x), xp = sol(t, x + d), xm = sol(t, x - d);
            const double a = (tp.n - tm.n) / (2 * d), b = (xp.n - xm.n) / (2 * d);
            const double e = (tp.v - tm.v) / (2 * d), f = (xp.v - xm.v) / (2 * d);
            const double det = a * f - b * e;
            if (det == 0.0 || !std::isfinite(det))
                throw NonConvergence("hodograph: singular Jacobian of the physical map");
            t -= (f * r0 - b * r1) / det;
            x -= (a * r1 - e * r0) / det;
        }
        throw NonConvergence("hodograph: Newton inversion did not converge");
    };
    return s;
}

inline HodographJet jet_from_sampler(const SolutionSampler& s, double n, double v)
{
    const std::vector<double> p{n, v};
    const auto val = s.sample(p);
    const auto d1 = s.first(p, 0);
    const auto d2 = s.second(p, 0, 0);
    HodographJet j;
    j.p = {val[0], val[1], n, v};
    j.tau_n = d1[0];
    j.chi_n = d1[1];
    j.tau_nn = d2[0];
    j.chi_nn = d2[1];
    return j;
}

// max(|f|, |g|) of the chosen coordinates on the sampled solution at a physical point.
inline std::pair<double, double> liebacklund_residual(LbCase c, const HodographPoint& point, const SolutionSampler& sol,
                                                      double alpha = 1.0)
{
    const auto j = jet_from_sampler(sol, point.n, point.v);
    const auto fg = liebacklund_coords(c, j, alpha);
    return {std::abs(fg.f), std::abs(fg.g)};
}

// ---- Gaussian profile: hodograph Cauchy-Kowalevski series ----
// tau = sum tau_k w^k, chi = sum chi_k w^k with w = v / alpha,
// tau_0 = 0, chi_0 = sqrt(-ln n), tau_{k+1} = n chi_k' / (k+1), chi_{k+1} = -alpha tau_k' / (k+1).

namespace detail {

using Taylor = std::vector<double>; // coefficients in (n - n0)

inline Taylor taylor_mul(const Taylor& a, const Taylor& b, std::size_t deg)
{
    Taylor c(deg + 1, 0.0);
    for (std::size_t i = 0; i < a.size() && i <= deg; ++i)
        for (std::size_t k = 0; k < b.size() && i + k <= deg; ++k)
            c[i + k] += a[i] * b[k];
    return c;
}

inline Taylor taylor_deriv(const Taylor& a)
{
    if (a.size() <= 1)
        return Taylor{0.0};
    Taylor d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        d[i - 1] = static_cast<double>(i) * a[i];
    return d;
}

} // namespace detail

inline HodographJet gaussian_ck_jet(double n, double w, double alpha, int K = 10)
{
    if (!(n > 0.0 && n < 1.0))
        throw DomainError("gaussian series: n must lie in (0, 1)");
    const std::size_t deg = static_cast<std::size_t>(K) + 3;
    // -ln(n0 + d)
    detail::Taylor L(deg + 1, 0.0);
    L[0] = -std::log(n);
    double pw = 1.0;
    for (std::size_t m = 1; m <= deg; ++m) {
        pw /= n;
        L[m] = ((m % 2 == 1) ? -1.0 : 1.0) * pw / static_cast<double>(m);
    }
    // sqrt by the power-series recurrence
    detail::Taylor S(deg + 1, 0.0);
    S[0] = std::sqrt(L[0]);
    for (std::size_t m = 1; m <= deg; ++m) {
        double acc = L[m];
        for (std::size_t i = 1; i < m; ++i)
            acc -= S[i] * S[m - i];
        S[m] = acc / (2.0 * S[0]);
    }
    const detail::Taylor nvar{n, 1.0};
    // coefficients with alpha = 1; the true ones carry alpha^j
    std::vector<detail::Taylor> tau(K + 1), chi(K + 1);
    tau[0] = detail::Taylor{0.0};
    chi[0] = S;
    for (int k = 0; k < K; ++k) {
        auto dc = detail::taylor_deriv(chi[k]);
        auto dt = detail::taylor_deriv(tau[k]);
        tau[k + 1] = detail::taylor_mul(nvar, dc, dc.size() ? dc.size() - 1 : 0);
        for (auto& c : tau[k + 1])
            c /= (k + 1);
        chi[k + 1] = dt;
        for (auto& c : chi[k + 1])
            c *= -1.0 / (k + 1);
    }
    auto coef = [](const detail::Taylor& a, std::size_t i) { return i < a.size() ? a[i] : 0.0; };
    HodographJet j;
    double T = 0, C = 0, Tn = 0, Cn = 0, Tnn = 0, Cnn = 0, Ta = 0, Ca = 0;
    double wk = 1.0;
    for (int k = 0; k <= K; ++k) {
        // tau_k ~ alpha^((k-1)/2) for odd k, chi_k ~ alpha^(k/2) for even k
        const int jt = (k - 1) / 2, jc = k / 2;
        const double at = std::pow(alpha, jt), ac = std::pow(alpha, jc);
        const double tw = at * wk, cw = ac * wk;
        T += tw * coef(tau[k], 0);
        Tn += tw * coef(tau[k], 1);
        Tnn += tw * 2.0 * coef(tau[k], 2);
        C += cw * coef(chi[k], 0);
        Cn += cw * coef(chi[k], 1);
        Cnn += cw * 2.0 * coef(chi[k], 2);
        if (k % 2 == 1 && jt > 0)
            Ta += jt * std::pow(alpha, jt - 1) * wk * coef(tau[k], 0);
        if (k % 2 == 0 && jc > 0)
            Ca += jc * std::pow(alpha, jc - 1) * wk * coef(chi[k], 0);
        wk *= w;
    }
    j.p = {T, C, n, alpha * w};
    j.tau_n = Tn;
    j.chi_n = Cn;
    j.tau_nn = Tnn;
    j.chi_nn = Cnn;
    j.tau_a = Ta;
    j.chi_a = Ca;
    return j;
}

// Sampler of the same series on {n, w, alpha}; used to cross-check the exact jet.
inline SolutionSampler gaussian_ck_sampler(int K = 10)
{
    SolutionSampler s;
    s.independent = {"n", "w", "alpha"};
    s.dependent = {"tau", "chi"};
    s.steps = {1e-3, 1e-3, 1e-4};
    s.evaluate = [K](const std::vector<double>& p) {
        const auto j = gaussian_ck_jet(p[0], p[1], p[2], K);
        return std::vector<double>{j.p.tau, j.p.chi};
    };
    return s;
}

// hodograph residuals tau_w - n chi_n and chi_w + alpha tau_n of the series at a point
inline std::array<double, 2> gaussian_hodograph_residual(double n, double w, double alpha, int K = 10)
{
    auto s = gaussian_ck_sampler(K);
    s.order = 4;
    const std::vector<double> p{n, w, alpha};
    const auto dn = s.first(p, 0), dw = s.first(p, 1);
    return {dw[0] - n * dn[1], dw[1] + alpha * dn[0]};
}

} // namespace rgsym

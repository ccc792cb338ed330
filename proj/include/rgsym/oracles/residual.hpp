#pragma once
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rgsym/numerics/errors.hpp"

namespace rgsym {

// Dependent fields on a uniform grid over (t, x); storage is row-major in t.
struct FieldSample {
    std::string t_name = "t";
    std::string x_name = "x";
    double t0 = 0.0, ht = 0.0;
    double x0 = 0.0, hx = 0.0;
    std::size_t nt = 0, nx = 0;
    std::map<std::string, std::vector<double>> fields;

    double t(std::size_t i) const { return t0 + ht * static_cast<double>(i); }
    double x(std::size_t j) const { return x0 + hx * static_cast<double>(j); }

    std::vector<double>& field(const std::string& name)
    {
        auto& f = fields[name];
        f.resize(nt * nx, 0.0);
        return f;
    }

    const std::vector<double>& get(const std::string& name) const
    {
        auto it = fields.find(name);
        if (it == fields.end())
            throw DomainError("FieldSample: missing field '" + name + "'");
        if (it->second.size() != nt * nx)
            throw DomainError("FieldSample: field '" + name + "' has the wrong size");
        return it->second;
    }

    template <class F>
    static FieldSample tabulate(double t0, double t1, std::size_t nt, double x0, double x1, std::size_t nx,
                                const std::vector<std::string>& names, F&& eval)
    {
        if (nt < 2 || nx < 2)
            throw GridTooSmall("FieldSample: need at least two nodes per axis");
        FieldSample s;
        s.t0 = t0;
        s.x0 = x0;
        s.nt = nt;
        s.nx = nx;
        s.ht = (t1 - t0) / static_cast<double>(nt - 1);
        s.hx = (x1 - x0) / static_cast<double>(nx - 1);
        std::vector<std::vector<double>*> out;
        for (const auto& n : names)
            out.push_back(&s.field(n));
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t j = 0; j < nx; ++j) {
                const auto vals = eval(s.t(i), s.x(j));
                for (std::size_t k = 0; k < out.size(); ++k)
                    (*out[k])[i * nx + j] = vals[k];
            }
        return s;
    }

    // Interior nodes span exactly [t0,t1]x[x0,x1]; two ghost layers are added outside.
    template <class F>
    static FieldSample tabulate_interior(double t0, double t1, std::size_t nt, double x0, double x1, std::size_t nx,
                                         const std::vector<std::string>& names, F&& eval)
    {
        if (nt < 2 || nx < 2)
            throw GridTooSmall("FieldSample: need at least two interior nodes per axis");
        const double ht = (t1 - t0) / static_cast<double>(nt - 1);
        const double hx = (x1 - x0) / static_cast<double>(nx - 1);
        return tabulate(t0 - 2.0 * ht, t1 + 2.0 * ht, nt + 4, x0 - 2.0 * hx, x1 + 2.0 * hx, nx + 4, names,
                        std::forward<F>(eval));
    }
};

enum class Equation { hopf, kcs, twoeq, basic };

inline std::string equation_id(Equation e)
{
    switch (e) {
    case Equation::hopf: return "hopf";
    case Equation::kcs: return "kcs";
    case Equation::twoeq: return "twoeq";
    case Equation::basic: return "basic";
    }
    return "?";
}

enum class Nonlinearity { unity, inverse };

struct EquationParams {
    double eps = 1.0;      // hopf amplitude
    double alpha = 1.0;    // kcs / basic refraction
    Nonlinearity phi = Nonlinearity::unity;
    double beta = 0.0;     // basic diffraction
    int nu = 0;            // basic geometry
    double omega = 1.0;    // twoeq
    double a = 1.0;
    double omega_L = 1.0;

    double phi_of(double n) const { return phi == Nonlinearity::unity ? 1.0 : 1.0 / n; }
};

struct ResidualReport {
    std::string equation_id;
    std::string grid;
    double max_residual = 0.0;
    double l2_residual = 0.0;
    std::vector<double> per_equation_max;
    std::optional<double> convergence_order;
    std::string notes;
};

namespace detail {

struct Stencil {
    const FieldSample& s;
    const std::vector<double>& f;
    std::size_t i, j;
    double at(long di, long dj) const
    {
        const auto ii = static_cast<std::size_t>(static_cast<long>(i) + di);
        const auto jj = static_cast<std::size_t>(static_cast<long>(j) + dj);
        return f[ii * s.nx + jj];
    }
    double v() const { return f[i * s.nx + j]; }
    double dt() const { return (f[(i + 1) * s.nx + j] - f[(i - 1) * s.nx + j]) / (2.0 * s.ht); }
    double dx() const { return (f[i * s.nx + j + 1] - f[i * s.nx + j - 1]) / (2.0 * s.hx); }
};

} // namespace detail

// Second-order central residual over the interior (two ghost layers on every side).
inline ResidualReport pde_residual(Equation eq, const FieldSample& s, const EquationParams& prm = {})
{
    if (s.nt < 5 || s.nx < 5)
        throw GridTooSmall("pde_residual: need two ghost layers around a nonempty interior");
    if (!(s.ht > 0.0) || !(s.hx > 0.0))
        throw DomainError("pde_residual: grid steps must be positive");

    std::vector<const std::vector<double>*> fs;
    std::size_t n_eq = 0;
    switch (eq) {
    case Equation::hopf: fs = {&s.get("u")}; n_eq = 1; break;
    case Equation::kcs:
    case Equation::basic: fs = {&s.get("v"), &s.get("n")}; n_eq = 2; break;
    case Equation::twoeq: fs = {&s.get("v"), &s.get("p")}; n_eq = 2; break;
    }

    ResidualReport rep;
    rep.equation_id = equation_id(eq);
    {
        std::ostringstream g;
        g << s.nt << "x" << s.nx << " " << s.t_name << "[" << s.t0 << "," << s.t(s.nt - 1) << "] " << s.x_name << "["
          << s.x0 << "," << s.x(s.nx - 1) << "] h=(" << s.ht << "," << s.hx << ")";
        rep.grid = g.str();
    }
    rep.per_equation_max.assign(n_eq, 0.0);
    double sum2 = 0.0;
    std::size_t count = 0;
    const double hx = s.hx;

    for (std::size_t i = 2; i + 2 < s.nt; ++i)
        for (std::size_t j = 2; j + 2 < s.nx; ++j) {
            double r[2] = {0.0, 0.0};
            switch (eq) {
            case Equation::hopf: {
                detail::Stencil u{s, *fs[0], i, j};
                r[0] = u.dt() + prm.eps * u.v() * u.dx();
                break;
            }
            case Equation::kcs: {
                detail::Stencil v{s, *fs[0], i, j}, n{s, *fs[1], i, j};
                r[0] = v.dt() + v.v() * v.dx() - prm.alpha * prm.phi_of(n.v()) * n.dx();
                r[1] = n.dt() + v.v() * n.dx() + n.v() * v.dx();
                break;
            }
            case Equation::twoeq: {
                detail::Stencil v{s, *fs[0], i, j}, p{s, *fs[1], i, j};
                r[0] = prm.omega * v.dt() + prm.a * v.v() * v.dx() - p.v();
                r[1] = prm.omega * p.dt() + prm.a * v.v() * p.dx() + prm.omega_L * prm.omega_L * v.v();
                break;
            }
            case Equation::basic: {
                detail::Stencil v{s, *fs[0], i, j}, n{s, *fs[1], i, j};
                const double x = s.x(j);
                const double nu = prm.nu;
                if (nu != 0.0 && std::abs(x) < 2.5 * hx)
                    throw DomainError("pde_residual: cylindrical stencil touches the axis");
                double diff = 0.0;
                if (prm.beta != 0.0) {
                    auto q = [&](long dj) { return std::sqrt(n.at(0, dj)); };
                    const double q0 = q(0);
                    const double q1 = (q(1) - q(-1)) / (2.0 * hx);
                    const double q2 = (q(1) - 2.0 * q0 + q(-1)) / (hx * hx);
                    const double q3 = (q(2) - 2.0 * q(1) + 2.0 * q(-1) - q(-2)) / (2.0 * hx * hx * hx);
                    double d = q2, dd = q3;
                    if (nu != 0.0) {
                        d += nu * q1 / x;
                        dd += nu * q2 / x - nu * q1 / (x * x);
                    }
                    diff = dd / q0 - (d / q0) * (q1 / q0);
                }
                r[0] = v.dt() + v.v() * v.dx() - prm.alpha * prm.phi_of(n.v()) * n.dx() - prm.beta * diff;
                r[1] = n.dt() + n.v() * v.dx() + v.v() * n.dx() + (nu != 0.0 ? nu * n.v() * v.v() / x : 0.0);
                break;
            }
            }
            for (std::size_t k = 0; k < n_eq; ++k) {
                const double a = std::abs(r[k]);
                rep.per_equation_max[k] = std::max(rep.per_equation_max[k], a);
                rep.max_residual = std::max(rep.max_residual, a);
                sum2 += a * a;
                ++count;
            }
        }
    rep.l2_residual = std::sqrt(sum2 / static_cast<double>(count));
    return rep;
}

// Least-squares slope of log R against log h.
inline double convergence_order(const std::vector<std::pair<double, double>>& data)
{
    if (data.size() < 2)
        throw DomainError("convergence_order: need at least two resolutions");
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!(data[i].first > 0.0) || !(data[i].second > 0.0))
            throw DomainError("convergence_order: steps and residuals must be positive");
        if (i > 0 && !(data[i].first < data[i - 1].first))
            throw DomainError("convergence_order: steps must be strictly decreasing");
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [h, r] : data) {
        mx += std::log(h);
        my += std::log(r);
    }
    mx /= static_cast<double>(data.size());
    my /= static_cast<double>(data.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [h, r] : data) {
        sxy += (std::log(h) - mx) * (std::log(r) - my);
        sxx += (std::log(h) - mx) * (std::log(h) - mx);
    }
    return sxy / sxx;
}

} // namespace rgsym

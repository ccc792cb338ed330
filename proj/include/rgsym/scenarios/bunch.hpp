#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "rgsym/group/core.hpp"
#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/ode.hpp"
#include "rgsym/numerics/quadrature.hpp"
#include "rgsym/numerics/roots.hpp"

namespace rgsym {

// Initial distribution as a function of the invariant I.
enum class DistributionKind { maxwellian, waterbag };

struct Species {
    std::string label;
    double charge = 1.0;
    double mass = 1.0;
    DistributionKind kind = DistributionKind::maxwellian;
    double theta = 1.0;     // maxwellian: g = A exp(-I / theta); waterbag: g = A for I < theta
    double amplitude = 1.0; // A

    void validate() const
    {
        if (!(mass > 0.0))
            throw ConfigError("bunch: species mass must be positive");
        if (!(theta > 0.0))
            throw ConfigError("bunch: species theta must be positive");
        if (!(amplitude >= 0.0))
            throw ConfigError("bunch: species amplitude must be nonnegative");
    }

    double q_over_m() const { return charge / mass; }

    double g(double I) const
    {
        if (kind == DistributionKind::maxwellian)
            return amplitude * std::exp(-I / theta);
        return I < theta ? amplitude : 0.0;
    }
};

enum class PotentialKind { zero, quadratic, gaussian_well };

// Phi0(x') of the self-similar potential.
struct Potential {
    PotentialKind kind = PotentialKind::quadratic;
    double k = -199.0 / 300.0; // quadratic: Phi0 = k Omega^2 x'^2 / 2
    double depth = 1.0;        // gaussian well: Phi0 = -depth exp(-x'^2 / width^2)
    double width = 1.0;

    double value(double x, double omega) const
    {
        switch (kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::quadratic: return 0.5 * k * omega * omega * x * x;
        case PotentialKind::gaussian_well: return -depth * std::exp(-x * x / (width * width));
        }
        return 0.0;
    }

    double derivative(double x, double omega) const
    {
        switch (kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::quadratic: return k * omega * omega * x;
        case PotentialKind::gaussian_well: return 2.0 * depth * x / (width * width) * std::exp(-x * x / (width * width));
        }
        return 0.0;
    }
};

struct BunchConfig {
    double omega = 1.0;
    std::vector<Species> species;
    Potential phi0;
    double x_max = 12.0;         // x' extent of the initial-density tables
    std::size_t n_table = 24001; // nodes of the x' table

    void validate() const
    {
        if (!(omega > 0.0))
            throw ConfigError("bunch: Omega must be positive");
        if (species.empty())
            throw ConfigError("bunch: at least one species is required");
        for (const auto& s : species)
            s.validate();
        if (!(x_max > 0.0) || n_table < 101)
            throw ConfigError("bunch: bad x' table");
    }

    const Species& at(std::size_t i) const
    {
        if (i >= species.size())
            throw DomainError("bunch: species index out of range");
        return species[i];
    }

    // Electrons and one ion species, Maxwellian in I, with the quadratic potential that keeps them neutral.
    static BunchConfig two_species_default(double omega = 1.0)
    {
        BunchConfig c;
        c.omega = omega;
        Species e{"electrons", -1.0, 0.01, DistributionKind::maxwellian, 100.0, 0.0};
        Species i{"ions", 1.0, 1.0, DistributionKind::maxwellian, 0.5, 0.0};
        // N(0) = A sqrt(2 pi theta) = 1 for both
        e.amplitude = 1.0 / std::sqrt(2.0 * std::numbers::pi * e.theta);
        i.amplitude = 1.0 / std::sqrt(2.0 * std::numbers::pi * i.theta);
        c.species = {e, i};
        c.phi0.kind = PotentialKind::quadratic;
        // equal exponents (1 + k (e/m)) / theta for both species
        c.phi0.k = (i.theta - e.theta) / (e.theta * i.q_over_m() - i.theta * e.q_over_m());
        return c;
    }
};

inline double bunch_scale(double omega, double t) { return std::sqrt(1.0 + omega * omega * t * t); }

inline double bunch_invariant(const BunchConfig& cfg, std::size_t s, double t, double x, double v)
{
    const double w = cfg.omega, r = x - v * t;
    return 0.5 * (v * v + w * w * r * r) + cfg.at(s).q_over_m() * cfg.phi0.value(x / bunch_scale(w, t), w);
}

// Effective potential energy per unit charge-to-mass at t = 0.
inline double bunch_potential_energy(const BunchConfig& cfg, std::size_t s, double xp)
{
    return 0.5 * cfg.omega * cfg.omega * xp * xp + cfg.at(s).q_over_m() * cfg.phi0.value(xp, cfg.omega);
}

// N_q(x') = int dv g(v^2 / 2 + U(x')) in closed form.
inline double initial_density(const BunchConfig& cfg, std::size_t s, double xp)
{
    const auto& sp = cfg.at(s);
    const double U = bunch_potential_energy(cfg, s, xp);
    if (sp.kind == DistributionKind::maxwellian)
        return sp.amplitude * std::sqrt(2.0 * std::numbers::pi * sp.theta) * std::exp(-U / sp.theta);
    return U < sp.theta ? 2.0 * sp.amplitude * std::sqrt(2.0 * (sp.theta - U)) : 0.0;
}

// Same moment by adaptive quadrature in v; independent of the closed forms.
inline double initial_density_quadrature(const BunchConfig& cfg, std::size_t s, double xp)
{
    const auto& sp = cfg.at(s);
    const double U = bunch_potential_energy(cfg, s, xp);
    auto f = [&](double v) { return sp.g(0.5 * v * v + U); };
    if (sp.kind == DistributionKind::waterbag) {
        if (!(U < sp.theta))
            return 0.0;
        return 2.0 * integrate_adaptive(f, 0.0, std::sqrt(2.0 * (sp.theta - U)) * (1.0 - 1e-15)).value;
    }
    const double vmax = std::sqrt(2.0 * 50.0 * sp.theta); // g drops below e^-50 of its peak
    return 2.0 * integrate_adaptive(f, 0.0, vmax, {1e-14, 1e-12, 4000}).value;
}

inline double density_evolution(const BunchConfig& cfg, std::size_t s, double t, double x)
{
    const double sc = bunch_scale(cfg.omega, t);
    return initial_density(cfg, s, x / sc) / sc;
}

struct NInvariants {
    double J3, J4;
};

inline NInvariants rg_n_invariants(double omega, double t, double x, double n)
{
    const double sc = bunch_scale(omega, t);
    return {x / sc, n * sc};
}

// Kinetic symmetry on {t, x, v}.
inline Generator bunch_generator(double omega)
{
    const double w2 = omega * omega;
    VariableSpace sp({"t", "x", "v"});
    return Generator(sp, {{"t", [w2](const Point& p) { return 1.0 + w2 * p[0] * p[0]; }},
                          {"x", [w2](const Point& p) { return w2 * p[0] * p[1]; }},
                          {"v", [w2](const Point& p) { return w2 * (p[1] - p[2] * p[0]); }}});
}

// Extension to the density on {t, x, n}.
inline Generator bunch_density_generator(double omega)
{
    const double w2 = omega * omega;
    VariableSpace sp({"t", "x", "n"});
    return Generator(sp, {{"t", [w2](const Point& p) { return 1.0 + w2 * p[0] * p[0]; }},
                          {"x", [w2](const Point& p) { return w2 * p[0] * p[1]; }},
                          {"n", [w2](const Point& p) { return -w2 * p[0] * p[2]; }}});
}

// Field that conserves I along particle orbits: E = -Phi0'(x') / s^3.
inline double bunch_field(const BunchConfig& cfg, double t, double x)
{
    const double sc = bunch_scale(cfg.omega, t);
    return -cfg.phi0.derivative(x / sc, cfg.omega) / (sc * sc * sc);
}

// Charge density sum_alpha e_alpha n_alpha.
inline double quasineutrality_residual(const BunchConfig& cfg, double t, double x)
{
    double r = 0.0;
    for (std::size_t s = 0; s < cfg.species.size(); ++s)
        r += cfg.species[s].charge * density_evolution(cfg, s, t, x);
    return r;
}

// Trapezoid integral of n over [-L, L] with m nodes.
inline double total_number(const BunchConfig& cfg, std::size_t s, double t, double L, std::size_t m = 8001)
{
    if (m < 2 || !(L > 0.0))
        throw DomainError("total_number: bad grid");
    const double h = 2.0 * L / static_cast<double>(m - 1);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i)
        y[i] = density_evolution(cfg, s, t, -L + h * static_cast<double>(i));
    return trapezoid(y, h);
}

// Tabulated cumulative distribution of N_q on [-x_max, x_max].
struct DensityTable {
    std::vector<double> x, cdf; // cdf normalized to 1 at x_max
    double total = 0.0;

    double cdf_at(double xp) const
    {
        if (xp <= x.front())
            return 0.0;
        if (xp >= x.back())
            return 1.0;
        const auto it = std::upper_bound(x.begin(), x.end(), xp);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double w = (xp - x[i]) / (x[i + 1] - x[i]);
        return cdf[i] + w * (cdf[i + 1] - cdf[i]);
    }

    double quantile(double u) const
    {
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.begin())
            return x.front();
        if (it == cdf.end())
            return x.back();
        const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        const double d = cdf[i] - cdf[i - 1];
        return d > 0.0 ? x[i - 1] + (u - cdf[i - 1]) / d * (x[i] - x[i - 1]) : x[i];
    }
};

inline DensityTable density_table(const BunchConfig& cfg, std::size_t s)
{
    cfg.validate();
    DensityTable tb;
    const std::size_t m = cfg.n_table;
    const double h = 2.0 * cfg.x_max / static_cast<double>(m - 1);
    std::vector<double> n(m);
    tb.x.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        tb.x[i] = -cfg.x_max + h * static_cast<double>(i);
        n[i] = initial_density(cfg, s, tb.x[i]);
    }
    tb.cdf = cumulative_trapezoid(n, h);
    tb.total = tb.cdf.back();
    if (!(tb.total > 0.0))
        throw DomainError("density_table: species carries no particles");
    for (double& c : tb.cdf)
        c /= tb.total;
    return tb;
}

struct EnergySpectrum {
    std::vector<double> energy; // E = Omega^2 x'^2 / 2
    std::vector<double> raw;    // N_q(x'(E))
    std::vector<double> dNdE;   // both signs of x' with |dx'/dE|
};

inline EnergySpectrum energy_spectrum(const BunchConfig& cfg, std::size_t s, double e_max, std::size_t n_points = 200)
{
    cfg.validate();
    if (!(e_max > 0.0) || n_points < 2)
        throw DomainError("energy_spectrum: bad energy grid");
    EnergySpectrum sp;
    const double w = cfg.omega;
    for (std::size_t i = 1; i <= n_points; ++i) {
        const double E = e_max * static_cast<double>(i) / static_cast<double>(n_points);
        const double xp = std::sqrt(2.0 * E) / w;
        const double N = initial_density(cfg, s, xp);
        sp.energy.push_back(E);
        sp.raw.push_back(N);
        sp.dNdE.push_back(2.0 * N / (w * w * xp));
    }
    return sp;
}

// Particle number per energy bin, from the x' table.
inline std::vector<double> energy_histogram(const BunchConfig& cfg, std::size_t s, const std::vector<double>& edges)
{
    if (edges.size() < 2 || edges.front() < 0.0)
        throw DomainError("energy_histogram: edges must be nonnegative and at least two");
    const auto tb = density_table(cfg, s);
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = std::sqrt(2.0 * edges[i]) / cfg.omega, b = std::sqrt(2.0 * edges[i + 1]) / cfg.omega;
        out.push_back(tb.total * ((tb.cdf_at(b) - tb.cdf_at(a)) + (tb.cdf_at(-a) - tb.cdf_at(-b))));
    }
    return out;
}

struct OracleOptions {
    std::size_t n_particles = 100000;
    double t_max = 2.0;
    std::size_t n_bins = 64;
    std::uint64_t seed = 12345;
    double tail = 1e-4;          // bins cover the central 1 - 2 tail of the mass
    std::size_t n_tracked = 1000; // particles whose I is monitored along the orbit
    Tolerance tol{1e-11, 1e-11, 200};
};

struct OracleResult {
    std::vector<double> x0, v0, x, v;
    std::vector<double> edges, empirical, exact;
    double max_rel_error = 0.0;   // max |empirical - exact| / max exact
    double number_ratio = 0.0;    // particles in range at t_max over those in range at t = 0
    double max_invariant_drift = 0.0;
};

namespace detail {
// inverse of the standard normal CDF by bracketed root finding on erfc
inline double normal_quantile(double u)
{
    if (!(u > 0.0 && u < 1.0))
        throw DomainError("normal_quantile: u must lie in (0, 1)");
    auto f = [u](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2) - u; };
    return find_root(f, {-40.0, 40.0}, {1e-15, 1e-15, 300});
}
} // namespace detail

// Stratified draws from f0 = g(I): x' by inverse CDF, v by the conditional law at x'.
// A jittered n_x by n_v lattice in (u_x, u_v) covers most draws; the remainder is plain random.
inline void sample_species(const BunchConfig& cfg, std::size_t s, std::size_t n, std::uint64_t seed,
                           std::vector<double>& x0, std::vector<double>& v0)
{
    const auto tb = density_table(cfg, s);
    const auto& sp = cfg.at(s);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto nv = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const std::size_t nx = nv == 0 ? 0 : n / nv;
    x0.resize(n);
    v0.resize(n);
    auto draw = [&](std::size_t k, double ux, double uv) {
        uv = std::clamp(uv, 1e-300, 1.0 - 1e-16);
        x0[k] = tb.quantile(ux);
        if (sp.kind == DistributionKind::maxwellian) {
            v0[k] = std::sqrt(sp.theta) * detail::normal_quantile(uv);
        } else {
            const double U = bunch_potential_energy(cfg, s, x0[k]);
            const double vmax = std::sqrt(std::max(0.0, 2.0 * (sp.theta - U)));
            v0[k] = vmax * (2.0 * uv - 1.0);
        }
    };
    std::size_t k = 0;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nv; ++j, ++k)
            draw(k, (static_cast<double>(i) + uni(rng)) / static_cast<double>(nx),
                 (static_cast<double>(j) + uni(rng)) / static_cast<double>(nv));
    for (; k < n; ++k)
        draw(k, uni(rng), uni(rng));
}

// Push one particle in the self-similar field.
inline std::array<double, 2> push_particle(const BunchConfig& cfg, std::size_t s, double x0, double v0, double t_end,
                                           const Tolerance& tol, std::vector<double>* drift_times = nullptr,
                                           double* max_drift = nullptr)
{
    const double qm = cfg.at(s).q_over_m();
    auto rhs = [&](double t, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = qm * bunch_field(cfg, t, y[0]);
    };
    OdeOptions opt = OdeOptions::from(tol);
    opt.dense = max_drift != nullptr;
    opt.record_steps = max_drift != nullptr;
    const auto sol = integrate_ode(rhs, std::array<double, 2>{x0, v0}, 0.0, t_end, opt);
    if (max_drift) {
        const double I0 = bunch_invariant(cfg, s, 0.0, x0, v0);
        auto check = [&](double t, const std::array<double, 2>& y) {
            *max_drift = std::max(*max_drift, std::abs(bunch_invariant(cfg, s, t, y[0], y[1]) - I0));
        };
        for (std::size_t k = 0; k < sol.params.size(); ++k)
            check(sol.params[k], sol.states[k]);
        if (drift_times)
            for (double t : *drift_times)
                if (t <= t_end)
                    check(t, sol.at(t));
    }
    return sol.final_state;
}

// Particle-characteristics check of the self-similar density.
inline OracleResult characteristics_oracle(const BunchConfig& cfg, std::size_t s, const OracleOptions& o)
{
    cfg.validate();
    if (o.n_particles < 10 || o.n_bins < 2 || !(o.t_max >= 0.0))
        throw DomainError("characteristics_oracle: bad options");
    OracleResult r;
    sample_species(cfg, s, o.n_particles, o.seed, r.x0, r.v0);
    const std::size_t n = o.n_particles;
    r.x.resize(n);
    r.v.resize(n);
    std::vector<double> probe;
    for (int k = 1; k <= 8; ++k)
        probe.push_back(o.t_max * k / 8.0);
    for (std::size_t i = 0; i < n; ++i) {
        const bool tracked = i % std::max<std::size_t>(1, n / std::max<std::size_t>(1, o.n_tracked)) == 0;
        const auto y = push_particle(cfg, s, r.x0[i], r.v0[i], o.t_max, o.tol, tracked ? &probe : nullptr,
                                     tracked ? &r.max_invariant_drift : nullptr);
        r.x[i] = y[0];
        r.v[i] = y[1];
    }
    const auto tb = density_table(cfg, s);
    const double sc = bunch_scale(cfg.omega, o.t_max);
    const double xr = std::max(std::abs(tb.quantile(o.tail)), std::abs(tb.quantile(1.0 - o.tail)));
    const double L = xr * sc, w = 2.0 * L / static_cast<double>(o.n_bins);
    const double weight = tb.total / static_cast<double>(n);
    r.edges.resize(o.n_bins + 1);
    for (std::size_t b = 0; b <= o.n_bins; ++b)
        r.edges[b] = -L + w * static_cast<double>(b);
    std::vector<double> counts(o.n_bins, 0.0);
    std::size_t inside = 0, inside0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(r.x0[i]) < xr)
            ++inside0;
        const double u = (r.x[i] + L) / w;
        if (u >= 0.0 && u < static_cast<double>(o.n_bins)) {
            counts[static_cast<std::size_t>(u)] += 1.0;
            ++inside;
        }
    }
    double peak = 0.0;
    for (std::size_t b = 0; b < o.n_bins; ++b) {
        r.empirical.push_back(counts[b] * weight / w);
        const double mass = tb.cdf_at(r.edges[b + 1] / sc) - tb.cdf_at(r.edges[b] / sc);
        r.exact.push_back(tb.total * mass / w);
        peak = std::max(peak, r.exact.back());
    }
    for (std::size_t b = 0; b < o.n_bins; ++b)
        r.max_rel_error = std::max(r.max_rel_error, std::abs(r.empirical[b] - r.exact[b]) / peak);
    r.number_ratio = static_cast<double>(inside) / static_cast<double>(std::max<std::size_t>(1, inside0));
    return r;
}

} // namespace rgsym

#pragma once
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "rgsym/group/core.hpp"
#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/roots.hpp"
#include "rgsym/numerics/special.hpp"
#include "rgsym/oracles/residual.hpp"

namespace rgsym {

enum class ResonanceModel { cold, hot };

// Scaled units: Delta = 1 and the amplitude a equals eps.
struct ResonanceConfig {
    double eps = 0.3;
    ResonanceModel model = ResonanceModel::cold;
    double omega = 1.0;
    double theta = 0.2;     // incidence angle
    double c = 1.0;         // speed of light in scaled units
    double x_lo = -3.0, x_hi = 3.0;
    double eta_lo = -8.0, eta_hi = 8.0;
    std::size_t n_tau = 64, n_x = 64, n_eta = 401;

    void validate() const
    {
        if (!(eps >= 0.0 && eps <= 1.0))
            throw ConfigError("resonance: eps must lie in [0, 1]");
        if (!(omega > 0.0) || !(c > 0.0))
            throw ConfigError("resonance: omega and c must be positive");
        if (!(x_hi > x_lo) || !(eta_hi > eta_lo))
            throw ConfigError("resonance: empty grid range");
        if (n_tau < 2 || n_x < 2 || n_eta < 2)
            throw ConfigError("resonance: grids need at least two nodes");
    }

    double kappa() const { return omega / c * std::sin(theta); }
};

inline const HotStructureTable& hot_table()
{
    static const HotStructureTable table;
    return table;
}

inline StructureJet structure_jet(ResonanceModel m, double eta)
{
    if (m == ResonanceModel::cold)
        return cold_structure_jet(eta);
    const auto& t = hot_table();
    if (eta < t.lo() || eta > t.hi())
        throw DomainError("resonance: hot model limited to eta in [-10, 10]");
    return t(eta);
}

struct ResonanceState {
    double p, v, x, eta, tau;
};

namespace detail {
struct Phase {
    double S, C, S_eta, C_eta;
};
inline Phase phase(const StructureJet& j, double tau)
{
    const double s = std::sin(tau), c = std::cos(tau);
    return {j.f1 * s + j.f2 * c, j.f1 * c - j.f2 * s, j.df1 * s + j.df2 * c, j.df1 * c - j.df2 * s};
}
} // namespace detail

// p and v scaled by the amplitude (a p, a v).
inline ResonanceState resonance_fields(const ResonanceConfig& cfg, double tau, double eta)
{
    cfg.validate();
    const auto ph = detail::phase(structure_jet(cfg.model, eta), tau);
    const double w = cfg.omega;
    return {-cfg.eps * w * w * ph.S, cfg.eps * w * ph.C, eta + cfg.eps * ph.S, eta, tau};
}

// d x / d eta at fixed tau
inline double resonance_dx_deta(const ResonanceConfig& cfg, double tau, double eta)
{
    return 1.0 + cfg.eps * detail::phase(structure_jet(cfg.model, eta), tau).S_eta;
}

// State at a physical point: x = eta + eps S(tau, eta) inverted for eta.
inline ResonanceState resonance_at(const ResonanceConfig& cfg, double tau, double x)
{
    cfg.validate();
    if (cfg.eps == 0.0)
        return {0.0, 0.0, x, x, tau};
    auto f = [&](double eta) { return eta + cfg.eps * detail::phase(structure_jet(cfg.model, eta), tau).S - x; };
    Bracket br{x - 2.0 * cfg.eps, x + 2.0 * cfg.eps};
    if (cfg.model == ResonanceModel::hot) {
        br.lo = std::max(br.lo, hot_table().lo());
        br.hi = std::min(br.hi, hot_table().hi());
    } else {
        br = expand_bracket(f, br.lo, br.hi);
    }
    const double eta = find_root(f, br, {1e-15, 1e-15, 400});
    if (!(resonance_dx_deta(cfg, tau, eta) > 0.0))
        throw Wavebreaking("resonance: the eta -> x map is not monotone");
    return resonance_fields(cfg, tau, eta);
}

// Residual of the two-equation system over tau in [0, 2 pi], x in [x_lo, x_hi].
inline ResidualReport resonance_pde_residual(const ResonanceConfig& cfg, std::size_t n_tau, std::size_t n_x)
{
    cfg.validate();
    auto f = FieldSample::tabulate_interior(0.0, 2.0 * std::numbers::pi, n_tau, cfg.x_lo, cfg.x_hi, n_x, {"v", "p"},
                                            [&](double tau, double x) {
                                                const auto s = resonance_at(cfg, tau, x);
                                                return std::vector<double>{s.v, s.p};
                                            });
    f.t_name = "tau";
    EquationParams prm;
    prm.omega = cfg.omega;
    prm.omega_L = cfg.omega;
    prm.a = 1.0;
    return pde_residual(Equation::twoeq, f, prm);
}

// R(h) and R(h/2) on the configured grid and its refinement.
inline std::pair<ResidualReport, ResidualReport> resonance_convergence(const ResonanceConfig& cfg)
{
    auto coarse = resonance_pde_residual(cfg, cfg.n_tau, cfg.n_x);
    auto fine = resonance_pde_residual(cfg, 2 * cfg.n_tau - 1, 2 * cfg.n_x - 1);
    if (coarse.max_residual > 0.0 && fine.max_residual > 0.0) {
        const double o = std::log(coarse.max_residual / fine.max_residual) / std::log(2.0);
        coarse.convergence_order = o;
        fine.convergence_order = o;
    }
    return {coarse, fine};
}

// R = -(p / omega^2) d_x + d_a on {tau, x, a, v, p}, unscaled v and p.
inline Generator resonance_generator(double omega = 1.0)
{
    VariableSpace s({"tau", "x", "a", "v", "p"});
    const double w2 = omega * omega;
    return Generator(s, {{"x", [w2](const Point& q) { return -q[4] / w2; }}, {"a", [](const Point&) { return 1.0; }}});
}

// Solution family on (tau, x, a) -> (v, p) with a playing the role of eps.
inline SolutionSampler resonance_sampler(const ResonanceConfig& cfg)
{
    SolutionSampler s;
    s.independent = {"tau", "x", "a"};
    s.dependent = {"v", "p"};
    s.evaluate = [cfg](const std::vector<double>& q) {
        ResonanceConfig c = cfg;
        c.eps = q[2];
        const auto st = resonance_at(c, q[0], q[1]);
        const auto ph = detail::phase(structure_jet(c.model, st.eta), q[0]);
        return std::vector<double>{c.omega * ph.C, -c.omega * c.omega * ph.S};
    };
    return s;
}

struct SecondaryFields {
    std::vector<double> tau, eta;
    std::vector<double> Ex, Vx, Ey, Vy, Bz, n; // row-major in tau
    double min_dx_deta = 0.0;
    double at(const std::vector<double>& f, std::size_t i, std::size_t j) const { return f[i * eta.size() + j]; }
};

// tau covers [0, 2 pi] with both endpoints; eta covers [eta_lo, eta_hi].
inline SecondaryFields secondary_fields(const ResonanceConfig& cfg)
{
    cfg.validate();
    const std::size_t nt = cfg.n_tau, ne = cfg.n_eta;
    SecondaryFields s;
    s.tau.resize(nt);
    s.eta.resize(ne);
    for (std::size_t i = 0; i < nt; ++i)
        s.tau[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nt - 1);
    for (std::size_t j = 0; j < ne; ++j)
        s.eta[j] = cfg.eta_lo + (cfg.eta_hi - cfg.eta_lo) * static_cast<double>(j) / static_cast<double>(ne - 1);
    const double he = s.eta[1] - s.eta[0], ht = s.tau[1] - s.tau[0];
    const double w = cfg.omega, e = cfg.eps, kap = cfg.kappa();
    const std::size_t N = nt * ne;
    s.Ex.resize(N);
    s.Vx.resize(N);
    s.Ey.resize(N);
    s.Vy.resize(N);
    s.Bz.resize(N);
    s.n.resize(N);
    std::vector<double> dEx_deta(N), dEy_deta(N);
    s.min_dx_deta = std::numeric_limits<double>::infinity();
    std::vector<StructureJet> jets(ne);
    for (std::size_t j = 0; j < ne; ++j)
        jets[j] = structure_jet(cfg.model, s.eta[j]);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < ne; ++j) {
            const auto ph = detail::phase(jets[j], s.tau[i]);
            const std::size_t k = i * ne + j;
            s.Ex[k] = -e * w * w * ph.S;
            s.Vx[k] = e * w * ph.C;
            const double dx = 1.0 + e * ph.S_eta;
            s.min_dx_deta = std::min(s.min_dx_deta, dx);
            if (!(dx > 0.0))
                throw Wavebreaking("secondary_fields: d x / d eta <= 0 on the grid");
            s.n[k] = w * w / dx;
            dEx_deta[k] = -e * w * w * ph.S_eta;
            const double dEx_dtau = -e * w * w * ph.C;
            dEy_deta[k] = -kap * dEx_dtau;
        }
    // eta integrals anchored to zero at the grid edge of largest |eta|
    const bool anchor_hi = std::abs(cfg.eta_hi) >= std::abs(cfg.eta_lo);
    auto integrate_eta = [&](const std::vector<double>& rate, std::vector<double>& out) {
        for (std::size_t i = 0; i < nt; ++i) {
            const std::size_t r = i * ne;
            if (anchor_hi) {
                out[r + ne - 1] = 0.0;
                for (std::size_t j = ne - 1; j-- > 0;)
                    out[r + j] = out[r + j + 1] - 0.5 * he * (rate[r + j] + rate[r + j + 1]);
            } else {
                out[r] = 0.0;
                for (std::size_t j = 1; j < ne; ++j)
                    out[r + j] = out[r + j - 1] + 0.5 * he * (rate[r + j - 1] + rate[r + j]);
            }
        }
    };
    integrate_eta(dEy_deta, s.Ey);
    // omega d_tau Vy = Ey, zero tau-mean over one period
    for (std::size_t j = 0; j < ne; ++j) {
        double acc = 0.0, mean = 0.0;
        s.Vy[j] = 0.0;
        for (std::size_t i = 1; i < nt; ++i) {
            acc += 0.5 * ht * (s.Ey[(i - 1) * ne + j] + s.Ey[i * ne + j]) / w;
            s.Vy[i * ne + j] = acc;
        }
        for (std::size_t i = 0; i + 1 < nt; ++i)
            mean += s.Vy[i * ne + j];
        mean /= static_cast<double>(nt - 1);
        for (std::size_t i = 0; i < nt; ++i)
            s.Vy[i * ne + j] -= mean;
    }
    std::vector<double> dBz(N);
    for (std::size_t k = 0; k < N; ++k)
        dBz[k] = (s.Vx[k] * dEy_deta[k] - s.Vy[k] * dEx_deta[k]) / cfg.c;
    integrate_eta(dBz, s.Bz);
    return s;
}

// Fourier amplitudes of n(tau) at fixed eta for harmonics 1..n_harmonics.
inline std::vector<double> harmonic_spectrum(const ResonanceConfig& cfg, double eta, int n_harmonics,
                                             std::size_t n_samples = 256)
{
    cfg.validate();
    if (n_harmonics < 1 || static_cast<std::size_t>(2 * n_harmonics) >= n_samples)
        throw DomainError("harmonic_spectrum: need 1 <= n_harmonics < n_samples / 2");
    const auto jet = structure_jet(cfg.model, eta);
    std::vector<double> n(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double tau = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_samples);
        const double dx = 1.0 + cfg.eps * detail::phase(jet, tau).S_eta;
        if (!(dx > 0.0))
            throw Wavebreaking("harmonic_spectrum: d x / d eta <= 0 at this eta");
        n[i] = cfg.omega * cfg.omega / dx;
    }
    std::vector<double> amp(static_cast<std::size_t>(n_harmonics));
    for (int k = 1; k <= n_harmonics; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i)
            acc += n[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * static_cast<double>(i) /
                                              static_cast<double>(n_samples));
        amp[static_cast<std::size_t>(k - 1)] = 2.0 * std::abs(acc) / static_cast<double>(n_samples);
    }
    return amp;
}

// Closed form for n = omega^2 / (1 + b sin(tau + phi)): 2 omega^2 r^k / sqrt(1 - b^2).
inline double harmonic_amplitude_closed(const ResonanceConfig& cfg, double eta, int k)
{
    const auto j = structure_jet(cfg.model, eta);
    const double b = cfg.eps * std::hypot(j.df1, j.df2);
    if (b == 0.0)
        return 0.0;
    if (!(b < 1.0))
        throw Wavebreaking("harmonic_amplitude_closed: b >= 1");
    const double r = (1.0 - std::sqrt(1.0 - b * b)) / b;
    return 2.0 * cfg.omega * cfg.omega * std::pow(r, k) / std::sqrt(1.0 - b * b);
}

} // namespace rgsym

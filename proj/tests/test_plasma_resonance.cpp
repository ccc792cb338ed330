#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rgsym/scenarios/resonance.hpp"

using namespace rgsym;

namespace {
ResonanceConfig cold(double eps)
{
    ResonanceConfig c;
    c.eps = eps;
    return c;
}
ResonanceConfig hot(double eps)
{
    ResonanceConfig c;
    c.eps = eps;
    c.model = ResonanceModel::hot;
    return c;
}
} // namespace

TEST(Resonance, ConfigValidation)
{
    EXPECT_THROW(cold(1.5).validate(), ConfigError);
    EXPECT_THROW(cold(-0.1).validate(), ConfigError);
    auto c = cold(0.3);
    c.omega = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_NO_THROW(cold(1.0).validate());
}

TEST(Resonance, LinearLimit)
{
    const auto s = resonance_fields(cold(0.0), 0.7, 1.3);
    EXPECT_EQ(s.p, 0.0);
    EXPECT_EQ(s.v, 0.0);
    EXPECT_EQ(s.x, 1.3);
}

TEST(Resonance, ColdQuarterPeriodValues)
{
    const double eps = 0.4;
    const auto s = resonance_fields(cold(eps), std::numbers::pi / 2, 0.0);
    EXPECT_NEAR(s.p, -eps, 1e-15);
    EXPECT_NEAR(s.x, eps, 1e-15);
    EXPECT_NEAR(s.v, 0.0, 1e-15);
}

TEST(Resonance, PeriodicInTau)
{
    for (auto cfg : {cold(0.5), hot(0.5)})
        for (double eta : {-2.0, 0.1, 3.0}) {
            const auto a = resonance_fields(cfg, 0.4, eta);
            const auto b = resonance_fields(cfg, 0.4 + 2 * std::numbers::pi, eta);
            EXPECT_NEAR(a.p, b.p, 1e-14);
            EXPECT_NEAR(a.v, b.v, 1e-14);
            EXPECT_NEAR(a.x, b.x, 1e-14);
        }
}

TEST(Resonance, InversionRecoversEta)
{
    for (auto cfg : {cold(0.6), hot(0.3)})
        for (double tau : {0.0, 1.1, 4.0})
            for (double eta : {-2.5, -0.3, 0.0, 0.8, 2.9}) {
                const auto f = resonance_fields(cfg, tau, eta);
                const auto g = resonance_at(cfg, tau, f.x);
                EXPECT_NEAR(g.eta, eta, 1e-12);
            }
}

TEST(Resonance, HotOutsideTableThrows)
{
    EXPECT_THROW(resonance_fields(hot(0.3), 0.0, 12.0), DomainError);
}

TEST(Resonance, ZeroAmplitudeResidualVanishes)
{
    const auto r = resonance_pde_residual(cold(0.0), 16, 16);
    EXPECT_LE(r.max_residual, 1e-12);
}

TEST(Resonance, ColdResidualConvergesAtSecondOrder)
{
    const auto [c, f] = resonance_convergence(cold(0.3));
    const double ratio = f.max_residual / c.max_residual;
    EXPECT_GE(ratio, 0.2);
    EXPECT_LE(ratio, 0.3);
}

TEST(Resonance, HotResidualConvergesAtSecondOrder)
{
    // the hot profile steepens toward negative x, so the asymptotic regime starts at a finer base grid
    auto cfg = hot(0.3);
    cfg.n_tau = 257;
    cfg.n_x = 257;
    const auto [c, f] = resonance_convergence(cfg);
    const double ratio = f.max_residual / c.max_residual;
    EXPECT_GE(ratio, 0.2);
    EXPECT_LE(ratio, 0.3);
}

TEST(Resonance, GeneratorInvarianceResidual)
{
    const auto cfg = cold(0.4);
    const auto s = resonance_fields(cfg, 0.3, 0.2);
    const double r = invariance_residual(resonance_generator(), resonance_sampler(cfg), {0.3, s.x, 0.4});
    EXPECT_LE(r, 1e-6);
}

TEST(Resonance, InvariantDefects)
{
    for (auto base : {cold(0.3), hot(0.3)}) {
        const auto gen = resonance_generator(base.omega);
        const auto smp = resonance_sampler(base);
        std::vector<Point> pts;
        for (double tau : {0.2, 1.7, 3.9, 5.5})
            for (double eta : {-1.5, 0.0, 0.4, 2.0}) {
                const auto f = resonance_fields(base, tau, eta);
                const auto vp = smp.evaluate({tau, f.x, base.eps});
                pts.push_back({tau, f.x, base.eps, vp[0], vp[1]});
            }
        auto field = [&](std::size_t k) {
            return [&, k](const Point& q) { return smp.evaluate({q[0], q[1], q[2]})[k]; };
        };
        EXPECT_LE(invariant_defect(gen, [](const Point& q) { return q[0]; }, pts), 1e-8);
        EXPECT_LE(invariant_defect(gen, field(0), pts), 1e-8);
        EXPECT_LE(invariant_defect(gen, field(1), pts), 1e-8);
    }
}

TEST(Resonance, AffineGroupLaw)
{
    const auto gen = resonance_generator();
    for (double a : {0.1, 0.3})
        for (double b : {0.05, 0.4})
            EXPECT_LE(check_group_law(gen, {0.3, 0.5, 0.2, 0.7, -0.4}, a, b), 1e-10);
    const auto moved = lie_flow(gen, {0.3, 0.5, 0.2, 0.7, -0.4}, 0.25);
    EXPECT_NEAR(moved[1], 0.5 + 0.4 * 0.25, 1e-12);
}

TEST(Resonance, SecondaryTrivialLimits)
{
    auto c = cold(0.0);
    c.n_tau = 33;
    c.n_eta = 41;
    const auto s0 = secondary_fields(c);
    for (double n : s0.n)
        EXPECT_NEAR(n, 1.0, 1e-15);
    auto d = cold(0.5);
    d.theta = 0.0;
    d.n_tau = 33;
    d.n_eta = 41;
    const auto s1 = secondary_fields(d);
    for (std::size_t k = 0; k < s1.Ey.size(); ++k) {
        EXPECT_EQ(s1.Ey[k], 0.0);
        EXPECT_EQ(s1.Vy[k], 0.0);
    }
}

TEST(Resonance, SecondaryPeriodicAndGauged)
{
    auto c = cold(0.5);
    c.n_tau = 129;
    c.n_eta = 201;
    const auto s = secondary_fields(c);
    const std::size_t last = c.n_tau - 1;
    double worst = 0.0;
    for (std::size_t j = 0; j < c.n_eta; ++j)
        for (const auto* f : {&s.Ex, &s.Vx, &s.Ey, &s.n, &s.Bz})
            worst = std::max(worst, std::abs(s.at(*f, 0, j) - s.at(*f, last, j)));
    EXPECT_LE(worst, 1e-13);
    for (std::size_t j = 0; j < c.n_eta; j += 20) {
        double m = 0.0;
        for (std::size_t i = 0; i < last; ++i)
            m += s.at(s.Vy, i, j);
        EXPECT_NEAR(m / static_cast<double>(last), 0.0, 1e-13);
    }
    EXPECT_EQ(s.at(s.Ey, 7, c.n_eta - 1), 0.0);
}

TEST(Resonance, EyMatchesClosedForm)
{
    // d_eta Ey = kappa eps (f1 cos - f2 sin), integrated exactly for the cold profile
    auto c = cold(0.4);
    c.n_tau = 17;
    c.n_eta = 4001;
    const auto s = secondary_fields(c);
    const double kap = c.kappa();
    // antiderivative of f1 is atan, of f2 is log(1 + eta^2) / 2
    auto Cint = [&](double tau, double eta) {
        return std::atan(eta) * std::cos(tau) - 0.5 * std::log1p(eta * eta) * std::sin(tau);
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < c.n_tau; ++i)
        for (std::size_t j = 0; j < c.n_eta; j += 100) {
            const double tau = s.tau[i], eta = s.eta[j];
            const double exact = -kap * c.eps * (Cint(tau, c.eta_hi) - Cint(tau, eta));
            worst = std::max(worst, std::abs(s.at(s.Ey, i, j) - exact));
        }
    EXPECT_LE(worst, 1e-6);
}

TEST(Resonance, WavebreakingMarginAndError)
{
    auto c = cold(0.9);
    c.eta_lo = -1.0;
    c.eta_hi = 1.0;
    c.n_eta = 201;
    c.n_tau = 257;
    const auto s = secondary_fields(c);
    // direct differentiation: min over tau of 1 + eps * A(eta) sin(tau + phi) is 1 - eps * max A
    double maxA = 0.0;
    for (double eta : s.eta) {
        const auto j = cold_structure_jet(eta);
        maxA = std::max(maxA, std::hypot(j.df1, j.df2));
    }
    EXPECT_NEAR(s.min_dx_deta, 1.0 - 0.9 * maxA, 1e-3);
    EXPECT_NEAR(maxA, 1.0, 1e-12);
    auto h = hot(1.0);
    h.eta_lo = -2.0;
    h.eta_hi = 2.0;
    h.n_eta = 81;
    h.n_tau = 65;
    double hA = 0.0;
    for (double eta = -2.0; eta <= 2.0; eta += 0.01) {
        const auto j = hot_structure_jet(eta);
        hA = std::max(hA, std::hypot(j.df1, j.df2));
    }
    if (hA >= 1.0)
        EXPECT_THROW(secondary_fields(h), Wavebreaking);
    else
        EXPECT_NO_THROW(secondary_fields(h));
}

TEST(Resonance, HarmonicsVanishInLinearLimit)
{
    const auto a = harmonic_spectrum(cold(0.0), 0.0, 8);
    for (double x : a)
        EXPECT_LE(std::abs(x), 1e-14);
}

TEST(Resonance, HarmonicsMatchClosedFormAndDecay)
{
    const auto cfg = cold(0.3);
    const auto a = harmonic_spectrum(cfg, 0.0, 8);
    for (int k = 1; k <= 8; ++k)
        EXPECT_NEAR(a[static_cast<std::size_t>(k - 1)], harmonic_amplitude_closed(cfg, 0.0, k), 1e-13);
    for (int k = 1; k <= 5; ++k)
        EXPECT_LT(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(k - 1)]);
}

TEST(Resonance, HarmonicsSpectrallyConverged)
{
    for (auto cfg : {cold(0.3), hot(0.3)})
        for (double eta : {0.0, 0.7}) {
            const auto a = harmonic_spectrum(cfg, eta, 8, 256);
            const auto b = harmonic_spectrum(cfg, eta, 8, 512);
            for (std::size_t k = 0; k < 8; ++k)
                EXPECT_LT(std::abs(a[k] - b[k]), 1e-10);
            EXPECT_NEAR(a[2], harmonic_amplitude_closed(cfg, eta, 3), 1e-12);
        }
}

TEST(Resonance, HarmonicWavebreakingPropagates)
{
    EXPECT_THROW(harmonic_spectrum(cold(1.0), 0.0, 4), Wavebreaking);
    EXPECT_THROW(harmonic_spectrum(cold(0.3), 0.0, 200, 256), DomainError);
}

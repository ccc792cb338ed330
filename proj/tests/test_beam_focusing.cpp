#include <gtest/gtest.h>

#include <cmath>

#include "rgsym/oracles/residual.hpp"
#include "rgsym/scenarios/beam.hpp"

using namespace rgsym;

namespace {
BeamConfig gauss(double a, double b)
{
    BeamConfig c;
    c.alpha = a;
    c.beta = b;
    return c;
}
BeamConfig binomial(double s0, double s2, double alpha = 0.0)
{
    BeamConfig c;
    c.profile = BeamProfile::binomial;
    c.alpha = alpha;
    c.beta = 0.0;
    c.s0 = s0;
    c.s2 = s2;
    c.chi_max = 1.5;
    c.n_fan = 61;
    return c;
}
} // namespace

TEST(Beam, ConfigValidation)
{
    EXPECT_THROW(gauss(0.0, 0.0).validate(), ConfigError);
    EXPECT_THROW(gauss(-1.0, 0.0).validate(), ConfigError);
    auto c = gauss(1, 0.5);
    c.nu = 2;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Beam, GaussianProfileAxisValues)
{
    const auto c = gauss(1.0, 0.5);
    const auto s = build_s_profile(c);
    EXPECT_NEAR(s.S(0.0), 1.0 - 2.0 * 0.5, 1e-15);
    EXPECT_NEAR(s.d2S(0.0), -2.0 * (1.0 - 0.5), 1e-15);
    EXPECT_NEAR(s.d2S_axis, -1.0, 1e-15);
    EXPECT_EQ(s.dS(0.0), 0.0);
}

TEST(Beam, GaussianProfileMatchesFiniteDifferenceOracle)
{
    for (int nu : {0, 1}) {
        auto c = gauss(1.3, 0.4);
        c.nu = nu;
        const auto s = build_s_profile(c);
        auto N = [](double x) { return std::exp(-x * x); };
        for (double chi : {0.0, 0.3, 1.0, 2.2}) {
            EXPECT_NEAR(s.S(chi), s_from_intensity(N, c.alpha, c.beta, nu, chi), 1e-8);
            const double h = 1e-4;
            EXPECT_NEAR(s.dS(chi), (s.S(chi + h) - s.S(chi - h)) / (2 * h), 1e-7);
            EXPECT_NEAR(s.d2S(chi), (s.dS(chi + h) - s.dS(chi - h)) / (2 * h), 1e-7);
        }
    }
}

TEST(Beam, BinomialConstantProfile)
{
    const auto s = build_s_profile(binomial(1.0, 0.0));
    for (double chi : {0.0, 0.5, 3.0}) {
        EXPECT_EQ(s.S(chi), 1.0);
        EXPECT_EQ(s.dS(chi), 0.0);
    }
}

TEST(Beam, ConstantProfileIsStationary)
{
    auto c = binomial(1.0, 0.0);
    c.beta = 0.3; // diffraction present; the matching intensity is normalized to 1
    for (double chi0 : {0.0, 0.4, 1.2}) {
        const auto tr = integrate_beam_orbit(c, chi0, 2.0);
        const auto& p = tr.final_state();
        EXPECT_NEAR(p[0], 2.0, 1e-12);
        EXPECT_NEAR(p[1], chi0, 1e-10);
        EXPECT_NEAR(p[2], 0.0, 1e-10);
        EXPECT_NEAR(p[3], c.intensity(chi0), 1e-10);
    }
}

TEST(Beam, ZeroSpanReturnsStart)
{
    const auto tr = integrate_beam_orbit(gauss(1, 0.5), 0.7, 0.0);
    EXPECT_EQ(tr.final_state(), beam_start(gauss(1, 0.5), 0.7));
}

TEST(Beam, AxisOrbitMatchesClosedForm)
{
    const auto c = gauss(1.0, 0.5);
    const auto tr = integrate_beam_orbit(c, 0.0, 2.0);
    for (std::size_t k = 0; k < tr.states.size(); k += 3) {
        const auto& p = tr.states[k];
        EXPECT_EQ(p[1], 0.0);
        EXPECT_EQ(p[2], 0.0);
        EXPECT_NEAR(p[3], 1.0 / (1.0 - p[0] * p[0]), 1e-6 * p[3]);
    }
    auto c0 = c;
    c0.nu = 0;
    const auto tr0 = integrate_beam_orbit(c0, 0.0, 2.0);
    const auto& q = tr0.final_state();
    EXPECT_NEAR(q[3], beam_axis_density(c0, q[0]), 1e-8);
}

TEST(Beam, SingularityTimes)
{
    for (auto [a, b] : {std::pair{1.0, 0.5}, {2.0, 0.0}, {1.0, 0.25}}) {
        const auto c = gauss(a, b);
        const double pred = 1.0 / std::sqrt(2.0 * (a - b));
        EXPECT_NEAR(beam_singularity_predicted(c), pred, 1e-14);
        EXPECT_NEAR(beam_singularity_time(c), pred, 0.02 * pred);
    }
    EXPECT_THROW(beam_singularity_time(gauss(0.5, 0.5)), NoSingularity);
    EXPECT_THROW(beam_singularity_time(gauss(0.3, 0.5)), NoSingularity);
}

TEST(Beam, DetectionInsensitiveToThreshold)
{
    const auto c = gauss(1.0, 0.5);
    for (double f : {1e4, 1e6, 1e8})
        EXPECT_NEAR(beam_singularity_time(c, default_lie_tolerance(), f), 1.0, 0.02);
}

TEST(Beam, ScaleIdentity)
{
    const double t1 = beam_singularity_time(gauss(1.0, 0.25));
    const double t2 = beam_singularity_time(gauss(2.0, 0.5));
    EXPECT_NEAR(t2 / t1, 1.0 / std::sqrt(2.0), 0.01 / std::sqrt(2.0));
}

TEST(Beam, FieldAtBoundary)
{
    const auto c = gauss(1.0, 0.5);
    const std::vector<double> xs{-1.5, -0.3, 0.0, 0.8, 2.0};
    const auto f = beam_field(c, 0.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_NEAR(f.n[i], std::exp(-xs[i] * xs[i]), 1e-6);
        EXPECT_EQ(f.v[i], 0.0);
    }
}

TEST(Beam, FieldOnAxisAndParity)
{
    const auto c = gauss(1.0, 0.5);
    std::vector<double> xs;
    for (int k = -10; k <= 10; ++k)
        xs.push_back(0.2 * k);
    const auto f = beam_field(c, 0.5, xs);
    EXPECT_NEAR(f.n[10], 4.0 / 3.0, 1e-8);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_EQ(f.n[i], f.n[xs.size() - 1 - i]);
        EXPECT_EQ(f.v[i], -f.v[xs.size() - 1 - i]);
    }
    // spline field against the pointwise solution
    for (double x : {0.3, 1.1}) {
        const auto [v, n] = beam_point(c, 0.5, x);
        const auto g = beam_field(c, 0.5, {x});
        EXPECT_NEAR(g.n[0], n, 1e-5);
        EXPECT_NEAR(g.v[0], v, 1e-5);
    }
}

TEST(Beam, FieldBeyondSingularityThrows)
{
    EXPECT_THROW(beam_field(gauss(1.0, 0.5), 1.05, {0.0}), CausticCrossed);
    EXPECT_THROW(beam_field(gauss(1.0, 0.5), 0.5, {10.0}), DomainError);
}

TEST(Beam, JacobianPositiveThenCrosses)
{
    for (auto [a, b] : {std::pair{1.0, 0.5}, {2.0, 0.0}}) {
        const auto c = gauss(a, b);
        const double ts = beam_singularity_predicted(c);
        for (double fr : {0.2, 0.6, 0.9, 0.94})
            EXPECT_GT(beam_fan(c, fr * ts).min_jacobian, 0.0);
        EXPECT_NEAR(beam_jacobian_crossing(c), ts, 0.05 * ts);
    }
}

TEST(Beam, PointGeneratorLeavesFieldInvariant)
{
    const auto c = gauss(1.0, 0.5);
    const auto g = beam_generator(c);
    const auto s = beam_sampler(c);
    for (double t : {0.2, 0.5})
        for (double x : {0.3, 0.9, 1.6})
            EXPECT_LE(invariance_residual(g, s, {t, x}), 1e-6);
}

TEST(Beam, CanonicalGVanishes)
{
    for (auto [a, b] : {std::pair{1.0, 0.5}, {2.0, 0.0}, {1.0, 0.25}}) {
        const auto c = gauss(a, b);
        const double ts = beam_singularity_predicted(c);
        for (double fr : {0.25, 0.5})
            for (double x : {0.2, 0.7, 1.5})
                EXPECT_LE(std::abs(beam_canonical_coords(c, fr * ts, x).g), 1e-7);
    }
}

TEST(Beam, CanonicalFScalesQuadratically)
{
    // the refraction-diffraction coordinate is second order in the parameters at fixed t
    std::vector<std::pair<double, double>> pts;
    for (double a : {0.05, 0.025, 0.0125}) {
        auto c = gauss(a, 0.5 * a);
        pts.push_back({a, std::abs(beam_canonical_coords(c, 0.3, 0.7).f)});
    }
    const double slope = convergence_order(pts);
    EXPECT_NEAR(slope, 2.0, 0.1);
}

TEST(Beam, CanonicalFVanishesForBinomialProfile)
{
    const auto c = binomial(1.0, -0.5, 1.0);
    for (double t : {0.3, 0.6})
        for (double x : {0.3, 0.8}) {
            const auto cc = beam_canonical_coords(c, t, x);
            EXPECT_LE(std::abs(cc.f), 1e-7);
            EXPECT_LE(std::abs(cc.g), 1e-7);
        }
}

TEST(Beam, ContinuityResidualSmall)
{
    const auto c = gauss(1.0, 0.5);
    for (double x : {0.3, 1.0, 1.8}) {
        const auto r = beam_pde_residual(c, 0.3, x);
        EXPECT_LE(std::abs(r.second), 1e-5);
    }
    EXPECT_THROW(beam_pde_residual(c, 0.3, 0.01), StencilOutOfDomain);
}

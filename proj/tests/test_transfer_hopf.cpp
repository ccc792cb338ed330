#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rgsym/oracles/residual.hpp"
#include "rgsym/scenarios/hopf.hpp"
#include "rgsym/scenarios/transfer.hpp"

using namespace rgsym;

namespace {

TransferConfig linear_cfg(double a, double nu) { return {a, nu, 0.0, 10.0}; }
TransferConfig nonlinear_cfg(double a, double beta) { return {a, 0.0, beta, 10.0}; }

HopfConfig hopf_cfg(HopfProfile p, double eps)
{
    HopfConfig c;
    c.profile = std::move(p);
    c.eps = eps;
    return c;
}

HopfProfile tanh_profile()
{
    std::vector<double> xs, us;
    for (int i = -600; i <= 600; ++i) {
        xs.push_back(0.005 * i);
        us.push_back(-std::tanh(2.0 * xs.back()));
    }
    return HopfProfile::tabulated(xs, us);
}

} // namespace

TEST(Transfer, Examples)
{
    EXPECT_DOUBLE_EQ(transfer_rg(linear_cfg(1, 1), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(transfer_rg(nonlinear_cfg(1, 1), 3.0), 0.25);
    EXPECT_NEAR(transfer_rg(linear_cfg(2, 0.5), std::log(4.0)), 1.0, 1e-15);
    EXPECT_NEAR(transfer_pt(linear_cfg(1, 1), 0.01), 0.99, 1e-15);
    EXPECT_DOUBLE_EQ(transfer_pt(nonlinear_cfg(1.7, 1), 0.0), 1.7);
    EXPECT_DOUBLE_EQ(transfer_pt(nonlinear_cfg(1, 1), 2.0), -1.0);
}

TEST(Transfer, ConfigValidation)
{
    EXPECT_THROW(transfer_rg({1.0, 1.0, 1.0, 5.0}, 1.0), ConfigError);
    EXPECT_THROW(transfer_rg({1.0, 0.0, 0.0, 5.0}, 1.0), ConfigError);
    EXPECT_THROW(transfer_rg({-1.0, 1.0, 0.0, 5.0}, 1.0), ConfigError);
    EXPECT_THROW(transfer_rg(linear_cfg(1, 1), 11.0), DomainError);
}

TEST(Transfer, RecoversGeneratingOde)
{
    for (const auto& c : {linear_cfg(1.3, 0.7), nonlinear_cfg(1.3, 0.7)}) {
        const double h = 1e-5;
        for (int k = 0; k < 50; ++k) {
            const double lam = 0.05 + 0.18 * k;
            const double A = transfer_rg(c, lam);
            const double d = (transfer_rg(c, lam + h) - transfer_rg(c, lam - h)) / (2 * h);
            const double rhs = c.linear() ? -c.nu * A : -c.beta * A * A;
            EXPECT_NEAR(d, rhs, 1e-8);
            if (k > 0)
                EXPECT_LE(A, transfer_rg(c, lam - 0.18));
        }
    }
}

TEST(Transfer, PerturbationTangency)
{
    for (const auto& c : {linear_cfg(1.0, 1.0), nonlinear_cfg(1.0, 1.0)}) {
        std::vector<std::pair<double, double>> d;
        for (double lam : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4})
            d.push_back({lam, std::abs(transfer_rg(c, lam) - transfer_pt(c, lam))});
        const double slope = convergence_order(d);
        EXPECT_GE(slope, 1.9);
        EXPECT_LE(slope, 2.1);
    }
}

TEST(Transfer, CompositionLaw)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.1, 3.0), ul(0.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const double a = ua(rng), l1 = ul(rng), l2 = ul(rng);
        EXPECT_LE(transfer_composition_defect(linear_cfg(1, 0.8), a, l1, l2), 1e-12);
        EXPECT_LE(transfer_composition_defect(nonlinear_cfg(1, 0.8), a, l1, l2), 1e-12);
    }
}

TEST(Transfer, LieFlowMatchesClosedForm)
{
    for (const auto& c : {linear_cfg(2.0, 0.5), nonlinear_cfg(2.0, 0.5)})
        for (double lam : {0.0, 0.4, 2.5, 7.0})
            EXPECT_NEAR(transfer_lie(c, lam), transfer_rg(c, lam), 1e-10);
}

TEST(Hopf, SolveExamples)
{
    auto lin = hopf_cfg(HopfProfile::linear(), 1.0);
    EXPECT_NEAR(hopf_solve(lin, 1.0, 2.0), 1.0, 1e-14);
    auto sine = hopf_cfg(HopfProfile::sine(), 1.0);
    EXPECT_NEAR(hopf_solve(sine, 0.0, std::numbers::pi / 2), -1.0, 1e-12);
    EXPECT_NEAR(hopf_solve(sine, 0.5, 0.0), 0.0, 1e-14);
    for (double x : {0.3, 1.1, 2.9})
        EXPECT_NEAR(hopf_solve(sine, 0.0, x), -std::sin(x), 1e-12);
}

TEST(Hopf, LinearClosedForm)
{
    for (double eps : {0.3, 1.0, 2.0})
        for (double t : {0.0, 0.5, 3.0, 20.0})
            for (double x : {-4.0, -0.7, 0.0, 1.3, 5.0})
                EXPECT_NEAR(hopf_solve(hopf_cfg(HopfProfile::linear(), eps), t, x), x / (1 + eps * t), 1e-12);
}

TEST(Hopf, PerturbationTheory)
{
    EXPECT_DOUBLE_EQ(hopf_pt(hopf_cfg(HopfProfile::linear(), 1.0), 0.0, 0.8), 0.8);
    EXPECT_NEAR(hopf_pt(hopf_cfg(HopfProfile::linear(), 1.0), 0.1, 1.0), 0.9, 1e-15);
    EXPECT_NEAR(hopf_pt(hopf_cfg(HopfProfile::sine(), 1.0), 0.1, std::numbers::pi / 2), -1.0, 1e-15);
}

TEST(Hopf, MultivaluedAfterShock)
{
    auto sine = hopf_cfg(HopfProfile::sine(), 1.0);
    EXPECT_THROW(hopf_solve(sine, 1.5, 0.0), MultivaluedRegion);
    EXPECT_THROW(hopf_characteristics_oracle(sine, 1.5, {0.0}), CharacteristicCrossing);
}

TEST(Hopf, SingularityTime)
{
    EXPECT_DOUBLE_EQ(hopf_singularity_time(hopf_cfg(HopfProfile::sine(), 2.0)), 0.5);
    EXPECT_TRUE(std::isinf(hopf_singularity_time(hopf_cfg(HopfProfile::linear(), 1.0))));
    auto tab = hopf_cfg(tanh_profile(), 0.5);
    double brute = 0.0;
    for (int i = -3000; i <= 3000; ++i)
        brute = std::min(brute, -2.0 / std::pow(std::cosh(2.0 * 0.001 * i), 2));
    EXPECT_NEAR(brute, -2.0, 1e-12);
    const double ts = hopf_singularity_time(tab);
    EXPECT_NEAR(ts, -1.0 / (0.5 * brute), 2e-4);
    // the oracle sees the characteristics cross just after the predicted time
    EXPECT_NO_THROW(hopf_characteristics_oracle(tab, 0.99 * ts, {0.0}));
    EXPECT_THROW(hopf_characteristics_oracle(tab, 1.01 * ts, {0.0}), CharacteristicCrossing);
}

TEST(Hopf, SatisfiesPde)
{
    for (const auto& c : {hopf_cfg(HopfProfile::sine(), 1.0), hopf_cfg(HopfProfile::linear(), 0.7)}) {
        const double tmax = std::isinf(hopf_singularity_time(c)) ? 2.0 : 0.8 * hopf_singularity_time(c);
        double worst = 0.0;
        for (int i = 1; i <= 12; ++i)
            for (int j = 0; j <= 12; ++j)
                worst = std::max(worst, std::abs(hopf_pde_residual(c, tmax * i / 12, -3.0 + 0.5 * j)));
        EXPECT_LE(worst, 1e-5);
    }
}

TEST(Hopf, GridResidualConvergesAtSecondOrder)
{
    auto c = hopf_cfg(HopfProfile::sine(), 1.0);
    EquationParams prm;
    prm.eps = 1.0;
    std::vector<std::pair<double, double>> data;
    for (std::size_t n : {41u, 81u, 161u}) {
        auto f = FieldSample::tabulate_interior(0.1, 0.5, n, -3.0, 3.0, n, {"u"}, [&](double t, double x) {
            return std::vector<double>{hopf_solve(c, t, x)};
        });
        data.push_back({f.hx, pde_residual(Equation::hopf, f, prm).max_residual});
    }
    const double ratio = data[2].second / data[1].second;
    EXPECT_GE(ratio, 0.2);
    EXPECT_LE(ratio, 0.3);
    const double order = convergence_order(data);
    EXPECT_GE(order, 1.9);
    EXPECT_LE(order, 2.1);
}

TEST(Hopf, CharacteristicsOracleAgrees)
{
    auto lin = hopf_cfg(HopfProfile::linear(), 1.0);
    EXPECT_NEAR(hopf_characteristics_oracle(lin, 1.0, {2.0})[0], 1.0, 1e-8);
    auto sine = hopf_cfg(HopfProfile::sine(), 1.0);
    std::vector<double> xs;
    for (int i = 0; i <= 400; ++i)
        xs.push_back(-std::numbers::pi + 2 * std::numbers::pi * i / 400);
    const auto t0 = hopf_characteristics_oracle(sine, 0.0, xs);
    const auto ref = hopf_characteristics_oracle(sine, 0.9, xs);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_NEAR(t0[i], -std::sin(xs[i]), 1e-12);
        worst = std::max(worst, std::abs(ref[i] - hopf_solve(sine, 0.9, xs[i])));
    }
    EXPECT_LE(worst, 1e-6);
    auto tab = hopf_cfg(tanh_profile(), 0.5);
    for (double x : {-1.0, -0.2, 0.0, 0.6})
        EXPECT_NEAR(hopf_characteristics_oracle(tab, 0.8, {x})[0], hopf_solve(tab, 0.8, x), 1e-6);
}

TEST(Hopf, GradientBlowup)
{
    for (double eps : {1.0, 2.5}) {
        auto sine = hopf_cfg(HopfProfile::sine(), eps);
        std::vector<double> xs;
        for (int i = -200; i <= 200; ++i)
            xs.push_back(std::numbers::pi * i / 200);
        const auto b = detect_gradient_blowup(sine, xs, 1.2 / eps);
        EXPECT_LE(b.rel_error, 0.01);
        EXPECT_LE(b.t_detected, b.t_predicted);
    }
    std::vector<double> xs{-1.0, 0.0, 1.0};
    EXPECT_THROW(detect_gradient_blowup(hopf_cfg(HopfProfile::linear(), 1.0), xs, 50.0), NoSingularity);
}

TEST(Hopf, AxisFunctional)
{
    EXPECT_DOUBLE_EQ(hopf_axis_slope(1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(hopf_axis_slope(1.0, 1.0), 0.5);
    EXPECT_NEAR(hopf_axis_invariant(0.3, 2.0, hopf_axis_slope(0.3, 2.0)), -1.0, 1e-15);
    auto lin = hopf_cfg(HopfProfile::linear(), 0.6);
    const double h = 1e-4;
    for (double t : {0.0, 0.5, 2.0, 10.0}) {
        const double ux = (hopf_solve(lin, t, h) - hopf_solve(lin, t, -h)) / (2 * h);
        EXPECT_NEAR(hopf_axis_slope(0.6, t), ux, 1e-6);
        EXPECT_NEAR(hopf_axis_invariant(0.6, t, hopf_axis_slope(0.6, t)), -1.0, 1e-10);
        EXPECT_NEAR(hopf_axis_slope_lie(0.6, t), hopf_axis_slope(0.6, t), 1e-10);
    }
    EXPECT_NEAR(std::abs(hopf_axis_slope(1.0, 0.01) - hopf_axis_slope_pt(1.0, 0.01)), 1e-4, 2e-6);
    EXPECT_LE(invariant_defect(hopf_axis_generator(),
                               [](const Point& p) { return hopf_axis_invariant(p[1], p[0], p[2]); },
                               {{0.5, 0.2, 0.9}, {2.0, 1.0, 0.3}}),
              1e-8);
}

TEST(Hopf, TabulatedLoader)
{
    std::istringstream good("# x U\n  \n-1 2\n0 0\n# mid comment\n1 -2\n");
    auto p = load_tabulated_profile(good);
    EXPECT_NEAR(p.U(0.5), -1.0, 1e-12);
    EXPECT_NEAR(p.H(-1.0), 0.5, 1e-12);
    EXPECT_THROW(p.U(1.5), RootNotFound);
    std::istringstream bad("0 1\n1 x\n");
    EXPECT_THROW(load_tabulated_profile(bad), ConfigError);
    std::istringstream nonmono("0 0\n1 1\n2 0.5\n");
    EXPECT_THROW(load_tabulated_profile(nonmono), DomainError);
    std::istringstream unsorted("0 0\n2 1\n1 2\n");
    EXPECT_THROW(load_tabulated_profile(unsorted), DomainError);
    EXPECT_THROW(load_tabulated_profile(std::string("/nonexistent/profile.txt")), ConfigError);
    auto c = hopf_cfg(tanh_profile(), 0.5);
    EXPECT_THROW(hopf_solve(c, 0.1, 10.0), RootNotFound);
}

TEST(Hopf, GeneratorsLeaveSolutionInvariant)
{
    auto lin = hopf_cfg(HopfProfile::linear(), 0.5);
    SolutionSampler w{{"t", "x", "eps"}, {"u"}, [](const std::vector<double>& p) {
                          return std::vector<double>{p[1] * p[2] / (1.0 + p[2] * p[0]) / p[2]};
                      }};
    EXPECT_LE(invariance_residual(hopf_r3(), w, {0.5, 1.0, 0.5}), 1e-6);
    auto sine = HopfProfile::sine();
    SolutionSampler ws{{"t", "x", "eps"}, {"u"}, [](const std::vector<double>& p) {
                           HopfConfig c;
                           c.eps = p[2];
                           return std::vector<double>{hopf_solve(c, p[0], p[1])};
                       }};
    for (auto pt : {std::vector<double>{0.3, 0.4, 1.0}, {0.5, -1.0, 0.8}, {0.2, 2.0, 1.5}}) {
        EXPECT_LE(invariance_residual(hopf_r3(), ws, pt), 1e-6);
        EXPECT_LE(invariance_residual(hopf_r2(sine), ws, pt), 1e-6);
        EXPECT_LE(invariance_residual(hopf_r1(), ws, pt), 1e-6);
    }
}

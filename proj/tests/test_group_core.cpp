#include <gtest/gtest.h>

#include <cmath>

#include "rgsym/group/core.hpp"

using namespace rgsym;

namespace {

Generator decay_generator(double nu)
{
    VariableSpace s({"x", "alpha"});
    return Generator(s, {{"x", [](const Point&) { return 1.0; }}, {"alpha", [nu](const Point& p) { return -nu * p[1]; }}});
}

// R3 with eps*psi4 = 1 on {t, x, eps, u}
Generator hopf_r3()
{
    VariableSpace s({"t", "x", "eps", "u"});
    return Generator(s, {{"x", [](const Point& p) { return p[0] * p[3]; }}, {"eps", [](const Point&) { return 1.0; }}});
}

// R2 for U(x) = x
Generator hopf_r2_linear()
{
    VariableSpace s({"t", "x", "eps", "u"});
    return Generator(s, {{"x", [](const Point& p) { return p[3] * (p[2] * p[0] + 1.0); }},
                         {"u", [](const Point& p) { return p[3]; }}});
}

Generator bunch_generator(double om)
{
    VariableSpace s({"t", "x", "v"});
    const double o2 = om * om;
    return Generator(s, {{"t", [o2](const Point& p) { return 1.0 + o2 * p[0] * p[0]; }},
                         {"x", [o2](const Point& p) { return o2 * p[0] * p[1]; }},
                         {"v", [o2](const Point& p) { return o2 * (p[1] - p[2] * p[0]); }}});
}

} // namespace

TEST(VariableSpace, RejectsDuplicatesAndIncompletePoints)
{
    EXPECT_THROW(VariableSpace({"t", "x", "t"}), DomainError);
    VariableSpace s({"t", "x"});
    EXPECT_EQ(s.index("x"), 1u);
    EXPECT_THROW(s.index("u"), DomainError);
    EXPECT_THROW(s.point({{"t", 1.0}}), DomainError);
    EXPECT_THROW(s.point({{"t", 1.0}, {"x", 2.0}, {"u", 0.0}}), DomainError);
    auto p = s.point({{"x", 2.0}, {"t", 1.0}});
    EXPECT_EQ(p, (Point{1.0, 2.0}));
}

TEST(Generator, CoordsKeyedByKnownNames)
{
    VariableSpace s({"t", "x"});
    EXPECT_THROW(Generator(s, {{"u", [](const Point&) { return 0.0; }}}), DomainError);
    Generator g(s, {{"x", [](const Point& p) { return p[0]; }}});
    EXPECT_EQ(g.eval({2.0, 5.0}), (Point{0.0, 2.0}));
    EXPECT_EQ(g.scaled(-3.0).eval({2.0, 5.0}), (Point{0.0, -6.0}));
}

TEST(IntegrateLie, ExponentialDecayTransfer)
{
    auto tr = integrate_lie(decay_generator(1.0), {0.0, 1.0}, std::log(2.0));
    EXPECT_NEAR(tr.final_state()[0], std::log(2.0), 1e-12);
    EXPECT_NEAR(tr.final_state()[1], 0.5, 1e-11);
    ASSERT_EQ(tr.param_samples.size(), tr.states.size());
    for (std::size_t i = 1; i < tr.param_samples.size(); ++i)
        EXPECT_GT(tr.param_samples[i], tr.param_samples[i - 1]);
}

TEST(IntegrateLie, ZeroGeneratorAndEmptySpan)
{
    Generator zero(VariableSpace({"a", "b"}), {});
    Point start{0.3, -1.7};
    EXPECT_EQ(integrate_lie(zero, start, 2.5).final_state(), start);
    EXPECT_EQ(integrate_lie(decay_generator(1.0), start, 0.0).final_state(), start);
}

TEST(IntegrateLie, HopfR3FiniteTransformation)
{
    auto tr = integrate_lie(hopf_r3(), {1.0, 0.0, 0.0, 0.3}, 0.5);
    const auto& p = tr.final_state();
    EXPECT_NEAR(p[0], 1.0, 1e-14);
    EXPECT_NEAR(p[1], 0.15, 1e-12);
    EXPECT_NEAR(p[2], 0.5, 1e-12);
    EXPECT_NEAR(p[3], 0.3, 1e-14);
}

TEST(IntegrateLie, TerminalEvent)
{
    LieEvent ev{"half", [](const Point& p) { return p[1] - 0.5; }};
    auto tr = integrate_lie(decay_generator(1.0), {0.0, 1.0}, 5.0, default_lie_tolerance(), &ev);
    ASSERT_TRUE(tr.terminal_event.has_value());
    EXPECT_EQ(tr.terminal_event->name, "half");
    EXPECT_NEAR(tr.terminal_event->param, std::log(2.0), 1e-9);
    EXPECT_NEAR(tr.final_param(), std::log(2.0), 1e-9);
}

TEST(IntegrateLie, StepUnderflowPropagates)
{
    // alpha' = alpha^2 blows up at a = 1
    VariableSpace s({"alpha"});
    Generator g(s, {{"alpha", [](const Point& p) { return p[0] * p[0]; }}});
    EXPECT_THROW(integrate_lie(g, {1.0}, 2.0), StepUnderflow);
}

TEST(GroupLaw, DecayAndIdentity)
{
    auto g = decay_generator(1.0);
    EXPECT_LE(check_group_law(g, {0.0, 1.0}, 0.5, 0.5), 1e-8);
    EXPECT_LE(check_group_law(g, {0.0, 1.0}, 0.0, 0.7), 1e-11);
    VariableSpace s({"lambda", "A"});
    Generator nl(s, {{"lambda", [](const Point&) { return 1.0; }}, {"A", [](const Point& p) { return -p[1] * p[1]; }}});
    EXPECT_LE(check_group_law(nl, {0.0, 2.0}, 0.3, 0.45), 1e-10);
}

TEST(InvariantDefect, HopfAndBunch)
{
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i)
        pts.push_back({0.2 * i, -1.0 + 0.5 * i, 0.1 * i, 0.3 - 0.2 * i});
    EXPECT_LE(invariant_defect(hopf_r3(), [](const Point& p) { return p[3]; }, pts), 1e-12);

    const double om = 1.3;
    auto gb = bunch_generator(om);
    EXPECT_GT(invariant_defect(gb, [](const Point& p) { return p[0]; }, {{0.5, 0.1, 0.2}}), 1.0);
    std::vector<Point> grid;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            grid.push_back({0.3 * i, -2.0 + 0.4 * j, 0.7});
    auto J3 = [om](const Point& p) { return p[1] / std::sqrt(1.0 + om * om * p[0] * p[0]); };
    EXPECT_LE(invariant_defect(gb, J3, grid), 1e-6);
}

TEST(InvarianceResidual, HopfLinearSolution)
{
    SolutionSampler w{{"t", "x", "eps"}, {"u"}, [](const std::vector<double>& p) {
                          return std::vector<double>{p[1] / (1.0 + p[2] * p[0])};
                      }};
    EXPECT_LE(invariance_residual(hopf_r3(), w, {0.5, 1.0, 0.5}), 1e-6);
    EXPECT_LE(invariance_residual(hopf_r2_linear(), w, {0.5, 1.0, 0.5}), 1e-6);
}

TEST(InvarianceResidual, ConstantSamplerAndLinearity)
{
    SolutionSampler w{{"t", "x", "eps"}, {"u"}, [](const std::vector<double>&) { return std::vector<double>{0.8}; }};
    auto g = hopf_r2_linear();
    const std::vector<double> p{0.5, 1.0, 0.5};
    EXPECT_NEAR(invariance_residual(g, w, p), 0.8, 1e-12);

    SolutionSampler bad{{"t", "x", "eps"}, {"u"}, [](const std::vector<double>& q) {
                            return std::vector<double>{q[1] * q[1] + q[0] * q[2]};
                        }};
    const double r = invariance_residual(g, bad, p);
    for (double c : {-2.0, 0.25, 7.0})
        EXPECT_NEAR(invariance_residual(g.scaled(c), bad, p), std::abs(c) * r, 1e-10 * std::abs(c) * r);
}

TEST(InvarianceResidual, StencilOutOfDomain)
{
    SolutionSampler w{{"t", "x", "eps"}, {"u"}, [](const std::vector<double>& p) {
                          if (p[1] <= 0.0)
                              throw DomainError("x must be positive");
                          return std::vector<double>{std::log(p[1])};
                      }};
    EXPECT_THROW(invariance_residual(hopf_r3(), w, {0.5, 0.0, 0.5}), StencilOutOfDomain);
    w.evaluate = [](const std::vector<double>& p) { return std::vector<double>{p[1]}; };
    w.in_domain = [](const std::vector<double>& p) { return p[0] >= 0.0; };
    EXPECT_THROW(invariance_residual(hopf_r3(), w, {0.0, 1.0, 0.5}), StencilOutOfDomain);
    w.steps = {0.0, 1e-5, 1e-5};
    EXPECT_THROW(invariance_residual(hopf_r3(), w, {0.5, 1.0, 0.5}), DomainError);
}

TEST(SolutionSampler, SecondDerivatives)
{
    SolutionSampler w{{"a", "b"}, {"u"}, [](const std::vector<double>& p) {
                          return std::vector<double>{std::sin(p[0]) * std::exp(p[1])};
                      }};
    w.steps = {1e-4, 1e-4};
    std::vector<double> p{0.4, 0.3};
    EXPECT_NEAR(w.second(p, 0, 0)[0], -std::sin(0.4) * std::exp(0.3), 1e-6);
    EXPECT_NEAR(w.second(p, 0, 1)[0], std::cos(0.4) * std::exp(0.3), 1e-6);
}

#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/roots.hpp"
#include "rgsym/numerics/tolerance.hpp"

namespace rgsym {

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    long max_steps = 1'000'000;
    double h_init = 0.0; // 0 selects a starting step automatically
    double h_max = std::numeric_limits<double>::infinity();
    bool dense = true;        // keep the interpolant of every step
    bool record_steps = true; // keep the accepted step endpoints

    static OdeOptions from(const Tolerance& tol)
    {
        tol.validate();
        OdeOptions o;
        o.abs_tol = tol.abs_tol;
        o.rel_tol = tol.rel_tol;
        return o;
    }
};

// Continuous extension of one Dormand-Prince step.
template <class State>
struct DenseSegment {
    double a0 = 0.0, h = 0.0;
    State rc1, rc2, rc3, rc4, rc5;

    State eval(double a) const
    {
        const double th = (a - a0) / h, th1 = 1.0 - th;
        State y = rc1;
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = rc1[i] + th * (rc2[i] + th1 * (rc3[i] + th * (rc4[i] + th1 * rc5[i])));
        return y;
    }
};

template <class State>
struct EventHit {
    double param;
    State state;
};

template <class State>
struct OdeSolution {
    std::vector<double> params;
    std::vector<State> states;
    std::vector<DenseSegment<State>> segments;
    std::optional<EventHit<State>> event;
    double final_param = 0.0;
    State final_state{};
    long steps = 0, rejected = 0, rhs_evals = 0;

    // Dense-output evaluation anywhere inside the integrated span.
    State at(double a) const
    {
        if (segments.empty()) {
            if (a == final_param)
                return final_state;
            throw DomainError("OdeSolution::at: no dense output stored");
        }
        const double lo = std::min(segments.front().a0, final_param);
        const double hi = std::max(segments.front().a0, final_param);
        if (a < lo - 1e-14 * (1 + std::abs(lo)) || a > hi + 1e-14 * (1 + std::abs(hi)))
            throw DomainError("OdeSolution::at: parameter outside the integrated span");
        const bool fwd = segments.front().h > 0;
        auto it = std::upper_bound(segments.begin(), segments.end(), a, [fwd](double v, const DenseSegment<State>& s) {
            return fwd ? v < s.a0 : v > s.a0;
        });
        if (it != segments.begin())
            --it;
        return it->eval(a);
    }
};

struct NoEvent {
    template <class State>
    double operator()(double, const State&) const { return 1.0; }
};

namespace detail {

template <class State, class Rhs>
void call_rhs(Rhs& rhs, double a, const State& y, State& dy)
{
    if constexpr (std::is_invocable_v<Rhs&, double, const State&, State&>)
        rhs(a, y, dy);
    else
        dy = rhs(a, y);
}

template <class State>
std::vector<double> to_vector(const State& y)
{
    return std::vector<double>(y.begin(), y.end());
}

struct DP5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                            d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                            d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

} // namespace detail

// Dormand-Prince 5(4) with Hairer's step control and continuous extension.
// The event function is terminal: integration stops at its first sign change.
template <class State, class Rhs, class Event = NoEvent>
OdeSolution<State> integrate_ode(Rhs&& rhs, State y0, double a0, double a1, const OdeOptions& opt = {},
                                 Event&& event = Event{})
{
    using detail::DP5;
    if (!(opt.abs_tol > 0.0) || !(opt.rel_tol > 0.0))
        throw DomainError("integrate_ode: tolerances must be positive");
    if (!std::isfinite(a0) || !std::isfinite(a1))
        throw DomainError("integrate_ode: span must be finite");

    OdeSolution<State> sol;
    sol.final_param = a0;
    sol.final_state = y0;
    if (opt.record_steps) {
        sol.params.push_back(a0);
        sol.states.push_back(y0);
    }
    if (a1 == a0)
        return sol;

    const double dir = a1 > a0 ? 1.0 : -1.0;
    const std::size_t n = y0.size();
    State k1 = y0, k2 = y0, k3 = y0, k4 = y0, k5 = y0, k6 = y0, k7 = y0, yt = y0, y1 = y0;
    auto f = [&](double a, const State& y, State& dy) {
        detail::call_rhs(rhs, a, y, dy);
        ++sol.rhs_evals;
    };
    auto scale = [&](double u, double v) { return opt.abs_tol + opt.rel_tol * std::max(std::abs(u), std::abs(v)); };

    double a = a0;
    State y = y0;
    f(a, y, k1);

    double h = opt.h_init;
    if (h <= 0.0) {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale(y[i], y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / n);
        d1 = std::sqrt(d1 / n);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::abs(a1 - a0));
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + dir * h0 * k1[i];
        f(a + dir * h0, yt, k2);
        double d2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale(y[i], y[i]);
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min(100.0 * h0, h1);
    }
    h = std::min({h, opt.h_max, std::abs(a1 - a0)});

    double g_prev = event(a, y);
    bool rejected_last = false;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (;;) {
        if (sol.steps + sol.rejected >= opt.max_steps)
            throw MaxIterations("integrate_ode: step budget exhausted");
        if (h < 16.0 * eps * std::max(1.0, std::abs(a)))
            throw StepUnderflow("integrate_ode: step size underflow", a, detail::to_vector(y));
        bool last = false;
        if (h >= std::abs(a1 - a)) {
            h = std::abs(a1 - a);
            last = true;
        }
        const double s = dir * h;

        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + s * DP5::a21 * k1[i];
        f(a + DP5::c2 * s, yt, k2);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + s * (DP5::a31 * k1[i] + DP5::a32 * k2[i]);
        f(a + DP5::c3 * s, yt, k3);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + s * (DP5::a41 * k1[i] + DP5::a42 * k2[i] + DP5::a43 * k3[i]);
        f(a + DP5::c4 * s, yt, k4);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + s * (DP5::a51 * k1[i] + DP5::a52 * k2[i] + DP5::a53 * k3[i] + DP5::a54 * k4[i]);
        f(a + DP5::c5 * s, yt, k5);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + s * (DP5::a61 * k1[i] + DP5::a62 * k2[i] + DP5::a63 * k3[i] + DP5::a64 * k4[i] +
                                DP5::a65 * k5[i]);
        const double a_new = last ? a1 : a + s;
        f(a + s, yt, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + s * (DP5::b1 * k1[i] + DP5::b3 * k3[i] + DP5::b4 * k4[i] + DP5::b5 * k5[i] +
                                DP5::b6 * k6[i]);
        f(a_new, y1, k7);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = s * (DP5::e1 * k1[i] + DP5::e3 * k3[i] + DP5::e4 * k4[i] + DP5::e5 * k5[i] +
                                  DP5::e6 * k6[i] + DP5::e7 * k7[i]);
            const double r = e / scale(y[i], y1[i]);
            err += r * r;
            finite = finite && std::isfinite(y1[i]);
        }
        err = finite ? std::sqrt(err / n) : std::numeric_limits<double>::infinity();

        if (err > 1.0) {
            ++sol.rejected;
            const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h *= rejected_last ? std::min(fac, 0.5) : fac;
            rejected_last = true;
            continue;
        }
        ++sol.steps;

        // the interpolant is always built: event location needs it
        DenseSegment<State> seg;
        {
            seg.a0 = a;
            seg.h = a_new - a;
            seg.rc1 = y;
            seg.rc2 = y;
            seg.rc3 = y;
            seg.rc4 = y;
            seg.rc5 = y;
            for (std::size_t i = 0; i < n; ++i) {
                const double dy = y1[i] - y[i];
                const double bspl = s * k1[i] - dy;
                seg.rc2[i] = dy;
                seg.rc3[i] = bspl;
                seg.rc4[i] = dy - s * k7[i] - bspl;
                seg.rc5[i] = s * (DP5::d1 * k1[i] + DP5::d3 * k3[i] + DP5::d4 * k4[i] + DP5::d5 * k5[i] +
                                  DP5::d6 * k6[i] + DP5::d7 * k7[i]);
            }
        }

        const double g_new = event(a_new, y1);
        const bool crossed = (g_prev != 0.0) && (g_new == 0.0 || ((g_prev < 0.0) != (g_new < 0.0)));
        if (crossed) {
            double a_ev = a_new;
            if (g_new != 0.0) {
                auto ge = [&](double p) { return event(p, seg.eval(p)); };
                const double lo = std::min(a, a_new), hi = std::max(a, a_new);
                a_ev = find_root(ge, {lo, hi}, Tolerance{1e-15, 4.0 * eps, 300});
            }
            State ye = (a_ev == a_new) ? y1 : seg.eval(a_ev);
            if (opt.dense)
                sol.segments.push_back(seg);
            if (opt.record_steps) {
                sol.params.push_back(a_ev);
                sol.states.push_back(ye);
            }
            sol.event = EventHit<State>{a_ev, ye};
            sol.final_param = a_ev;
            sol.final_state = ye;
            return sol;
        }
        g_prev = g_new;

        if (opt.dense)
            sol.segments.push_back(seg);
        a = a_new;
        y = y1;
        k1 = k7;
        if (opt.record_steps) {
            sol.params.push_back(a);
            sol.states.push_back(y);
        }
        if (last)
            break;

        const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        h *= rejected_last ? std::min(fac, 1.0) : fac;
        h = std::min(h, opt.h_max);
        rejected_last = false;
    }
    sol.final_param = a;
    sol.final_state = y;
    return sol;
}

} // namespace rgsym

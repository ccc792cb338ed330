#pragma once
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "rgsym/numerics/errors.hpp"

namespace rgsym {

template <class T>
struct QuadResult {
    T value{};
    double abs_error = 0.0;
    int evaluations = 0;
};

struct QuadControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 2000;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

struct GK15 {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    // 7-point Gauss weights on the odd Kronrod nodes xgk[1], xgk[3], xgk[5], xgk[7]
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class T>
struct Segment {
    double a, b;
    T value;
    double err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T fc = f(c);
    T k = fc * GK15::wgk[7];
    T g = fc * GK15::wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * GK15::xgk[j];
        const T f1 = f(c - dx), f2 = f(c + dx);
        k += (f1 + f2) * GK15::wgk[j];
        if (j % 2 == 1)
            g += (f1 + f2) * GK15::wg[j / 2];
    }
    return {a, b, k * h, magnitude((k - g) * h)};
}

} // namespace detail

// Globally adaptive G7-K15 on a finite interval: always refine the worst segment.
template <class F, class T = std::invoke_result_t<F&, double>>
QuadResult<T> integrate_adaptive(F f, double a, double b, const QuadControl& ctl = {})
{
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("integrate_adaptive: interval must be finite");
    QuadResult<T> out;
    if (a == b)
        return out;
    std::priority_queue<detail::Segment<T>> heap;
    heap.push(detail::gk15<T>(f, a, b));
    T total = heap.top().value;
    double err = heap.top().err;
    int evals = 15;
    while (err > std::max(ctl.abs_tol, ctl.rel_tol * detail::magnitude(total))) {
        if (static_cast<int>(heap.size()) >= ctl.max_intervals)
            throw NonConvergence("integrate_adaptive: subdivision limit reached before tolerance");
        const auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        const auto left = detail::gk15<T>(f, worst.a, m);
        const auto right = detail::gk15<T>(f, m, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        if (m == worst.a || m == worst.b)
            throw NonConvergence("integrate_adaptive: interval collapsed to machine resolution");
    }
    // recompute the sum to shed accumulated rounding from the incremental updates
    T sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().err;
        heap.pop();
    }
    out.value = sum;
    out.abs_error = esum;
    out.evaluations = evals;
    return out;
}

// Composite trapezoid on uniformly spaced samples.
inline double trapezoid(const std::vector<double>& y, double h)
{
    if (y.size() < 2)
        return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        s += y[i];
    return s * h;
}

// Running trapezoid integral, out[0] = 0.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& y, double h)
{
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t i = 1; i < y.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
    return out;
}

} // namespace rgsym

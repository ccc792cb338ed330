#pragma once
#include <cmath>
#include <limits>
#include <utility>

#include "rgsym/numerics/tolerance.hpp"

namespace rgsym {

namespace detail {
inline bool opposite(double a, double b) { return (a < 0.0) != (b < 0.0); }
} // namespace detail

// Bisection-secant hybrid. The bracket [x0, x1] always straddles the root;
// a secant step is taken when it lands inside the bracket, otherwise bisect.
template <class F>
double find_root(F&& f, Bracket br, const Tolerance& tol = {})
{
    br.validate();
    tol.validate();
    double x0 = br.lo, x1 = br.hi;
    double f0 = f(x0), f1 = f(x1);
    if (!std::isfinite(f0) || !std::isfinite(f1))
        throw DomainError("find_root: objective not finite at bracket ends");
    if (f0 == 0.0)
        return x0;
    if (f1 == 0.0)
        return x1;
    if (!detail::opposite(f0, f1))
        throw NoSignChange("find_root: objective has the same sign at both bracket ends");

    double b = x1, fb = f1, c = x0, fc = f0;
    if (std::abs(f0) < std::abs(f1)) {
        std::swap(b, c);
        std::swap(fb, fc);
    }
    double width_prev = std::abs(x1 - x0);
    int slow = 0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int it = 0; it < tol.max_iter; ++it) {
        const double lo = std::min(x0, x1), hi = std::max(x0, x1);
        const double mid = 0.5 * (lo + hi);
        double s = mid;
        if (slow < 2 && fb != fc) {
            const double sec = b - fb * (b - c) / (fb - fc);
            if (sec > lo && sec < hi)
                s = sec;
        }
        const double fs = f(s);
        if (!std::isfinite(fs))
            throw DomainError("find_root: objective not finite inside bracket");
        if (std::abs(fs) <= tol.abs_tol || fs == 0.0)
            return s;
        if (detail::opposite(fs, f0)) {
            x1 = s;
            f1 = fs;
        } else {
            x0 = s;
            f0 = fs;
        }
        c = b;
        fc = fb;
        b = s;
        fb = fs;

        const double width = std::abs(x1 - x0);
        const double best = std::abs(f0) < std::abs(f1) ? x0 : x1;
        if (width <= tol.rel_tol * std::abs(best) || width <= 2.0 * eps * std::abs(best) ||
            width <= std::numeric_limits<double>::min())
            return best;
        slow = (width > 0.5 * width_prev) ? slow + 1 : 0;
        width_prev = width;
    }
    throw MaxIterations("find_root: iteration budget exhausted");
}

// Expands [lo, hi] outward geometrically until the objective changes sign.
template <class F>
Bracket expand_bracket(F&& f, double lo, double hi, int max_expand = 60)
{
    double flo = f(lo), fhi = f(hi);
    for (int k = 0; k < max_expand; ++k) {
        if (detail::opposite(flo, fhi) || flo == 0.0 || fhi == 0.0)
            return {lo, hi};
        const double w = hi - lo;
        if (std::abs(flo) < std::abs(fhi)) {
            lo -= w;
            flo = f(lo);
        } else {
            hi += w;
            fhi = f(hi);
        }
    }
    throw NoSignChange("expand_bracket: no sign change found");
}

} // namespace rgsym

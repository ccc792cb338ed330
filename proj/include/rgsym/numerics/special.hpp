#pragma once
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/interpolation.hpp"
#include "rgsym/numerics/quadrature.hpp"
#include "rgsym/numerics/roots.hpp"

namespace rgsym {

// Dawson integral D(x) = exp(-x^2) * int_0^x exp(s^2) ds by its continued fraction
// x / (1 + 2x^2/(3 - 4x^2/(5 + 6x^2/(7 - ...)))). Accurate for |x| >= 3 at depth 100.
inline double dawson_cf(double x, int depth = 100)
{
    double acc = 2.0 * depth + 1.0;
    for (int k = depth; k >= 1; --k) {
        const double num = 2.0 * k * x * x;
        acc = (2.0 * k - 1.0) + ((k % 2 == 1) ? num : -num) / acc;
    }
    return x / acc;
}

inline double erfi(double x)
{
    if (!std::isfinite(x) || std::abs(x) > 6.0)
        throw DomainError("erfi: |x| > 6 is outside the supported range");
    const double ax = std::abs(x);
    double r;
    if (ax <= 3.0) {
        // sum x^(2k+1) / (k! (2k+1))
        const double x2 = ax * ax;
        double pw = ax, sum = ax;
        for (int k = 1; k < 200; ++k) {
            pw *= x2 / k;
            const double term = pw / (2.0 * k + 1.0);
            sum += term;
            if (term < 1e-17 * sum)
                break;
        }
        r = 2.0 / std::sqrt(std::numbers::pi) * sum;
    } else {
        r = 2.0 / std::sqrt(std::numbers::pi) * std::exp(ax * ax) * dawson_cf(ax);
    }
    return x < 0.0 ? -r : r;
}

struct StructurePair {
    double f1;
    double f2;
};

// Value and derivative of both structure functions at one point.
struct StructureJet {
    double f1, f2, df1, df2;
};

inline StructurePair cold_structure_functions(double eta)
{
    const double d = 1.0 / (1.0 + eta * eta);
    return {d, eta * d};
}

inline StructureJet cold_structure_jet(double eta)
{
    const double d = 1.0 / (1.0 + eta * eta);
    return {d, eta * d, -2.0 * eta * d * d, (1.0 - eta * eta) * d * d};
}

struct HotQuadratureControl {
    double cutoff = 40.0; // truncate where the integrand modulus drops below exp(-cutoff)
    double abs_tol = 1e-11;
    double rel_tol = 1e-12;
};

namespace detail {

// The integrals F = f1 + i f2 = int_0^inf exp(i(eta s + s^3/3)) ds are evaluated on the ray
// s = r exp(i pi/6), where the integrand decays like exp(-r^3/3).
inline double hot_ray_length(double eta, double cutoff)
{
    auto g = [&](double r) { return r * r * r / 3.0 + 0.5 * eta * r - cutoff - std::log1p(r); };
    double lo = std::max(0.0, std::sqrt(std::max(0.0, -0.5 * eta)));
    double hi = lo + 1.0;
    while (g(hi) < 0.0)
        hi *= 2.0;
    return find_root(g, {lo, hi}, Tolerance{1e-10, 1e-10, 200});
}

inline std::complex<double> hot_integral(double eta, int power, const HotQuadratureControl& ctl)
{
    if (!std::isfinite(eta))
        throw DomainError("hot_structure_functions: eta must be finite");
    const double R = hot_ray_length(eta, ctl.cutoff);
    const double c = 0.5 * std::sqrt(3.0);
    auto integrand = [&](double r) {
        const std::complex<double> e(-r * r * r / 3.0 - 0.5 * eta * r, eta * r * c);
        std::complex<double> v = std::exp(e);
        return power == 0 ? v : v * r;
    };
    QuadControl q{ctl.abs_tol, ctl.rel_tol, 4000};
    const auto res = integrate_adaptive(integrand, 0.0, R, q);
    const std::complex<double> rot = std::polar(1.0, std::numbers::pi / 6.0);
    if (power == 0)
        return rot * res.value;
    // d/d eta brings down i s = i r e^{i pi/6}, and ds = e^{i pi/6} dr
    return std::complex<double>(0.0, 1.0) * rot * rot * res.value;
}

} // namespace detail

inline StructurePair hot_structure_functions(double eta, const HotQuadratureControl& ctl = {})
{
    const auto F = detail::hot_integral(eta, 0, ctl);
    return {F.real(), F.imag()};
}

inline StructureJet hot_structure_jet(double eta, const HotQuadratureControl& ctl = {})
{
    const auto F = detail::hot_integral(eta, 0, ctl);
    const auto dF = detail::hot_integral(eta, 1, ctl);
    return {F.real(), F.imag(), dF.real(), dF.imag()};
}

// Tabulated hot pair on [lo, hi]. f1'' = eta f1 and f2'' = eta f2 - 1 close the
// quintic Hermite data, so only values and slopes need quadrature.
class HotStructureTable {
public:
    explicit HotStructureTable(double lo = -10.0, double hi = 10.0, double step = 0.02,
                               const HotQuadratureControl& ctl = {})
    {
        if (!(hi > lo) || !(step > 0.0))
            throw DomainError("HotStructureTable: bad range");
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
        const double h = (hi - lo) / static_cast<double>(n - 1);
        std::vector<double> f1(n), f2(n), d1(n), d2(n), a1(n), a2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double eta = lo + h * static_cast<double>(i);
            const auto j = hot_structure_jet(eta, ctl);
            f1[i] = j.f1;
            f2[i] = j.f2;
            d1[i] = j.df1;
            d2[i] = j.df2;
            a1[i] = eta * j.f1;
            a2[i] = eta * j.f2 - 1.0;
        }
        t1_ = QuinticHermiteTable(lo, h, f1, d1, a1);
        t2_ = QuinticHermiteTable(lo, h, f2, d2, a2);
    }

    double lo() const { return t1_.lo(); }
    double hi() const { return t1_.hi(); }

    StructureJet operator()(double eta) const
    {
        const auto [f1, df1] = t1_.eval(eta);
        const auto [f2, df2] = t2_.eval(eta);
        return {f1, f2, df1, df2};
    }

private:
    QuinticHermiteTable t1_, t2_;
};

} // namespace rgsym

#pragma once
#include <algorithm>
#include <cmath>
#include <vector>

#include "rgsym/numerics/errors.hpp"

namespace rgsym {

namespace detail {
inline std::size_t locate(const std::vector<double>& x, double v)
{
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(i, x.size() - 2);
}

inline void check_knots(const std::vector<double>& x, const std::vector<double>& y, const char* who)
{
    if (x.size() < 2 || x.size() != y.size())
        throw DomainError(std::string(who) + ": need at least two knots and matching sizes");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw DomainError(std::string(who) + ": knots must be strictly increasing");
}
} // namespace detail

// Cubic Hermite with Fritsch-Carlson slopes; preserves monotone data.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
    {
        detail::check_knots(x_, y_, "Pchip");
        const std::size_t n = x_.size();
        d_.assign(n, 0.0);
        std::vector<double> h(n - 1), del(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            del[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        if (n == 2) {
            d_[0] = d_[1] = del[0];
            return;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (del[i - 1] * del[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        d_[0] = end_slope(h[0], h[1], del[0], del[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }

    double operator()(double v) const { return eval(v, 0); }
    double derivative(double v) const { return eval(v, 1); }
    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    const std::vector<double>& slopes() const { return d_; }

    // Smallest derivative over the whole span; the derivative is quadratic per interval.
    double min_derivative() const
    {
        double m = d_[0];
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
            const double h = x_[i + 1] - x_[i];
            const double del = (y_[i + 1] - y_[i]) / h;
            // p'(s) = d0 + s*(2c2) + s^2*(3c3), s in [0,h]
            const double c2 = (3.0 * del - 2.0 * d_[i] - d_[i + 1]) / h;
            const double c3 = (d_[i] + d_[i + 1] - 2.0 * del) / (h * h);
            m = std::min({m, d_[i], d_[i + 1]});
            if (c3 != 0.0) {
                const double s = -c2 / (3.0 * c3);
                if (s > 0.0 && s < h)
                    m = std::min(m, d_[i] + 2.0 * c2 * s + 3.0 * c3 * s * s);
            }
        }
        return m;
    }

private:
    static double end_slope(double h0, double h1, double del0, double del1)
    {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0)
            d = 0.0;
        else if (del0 * del1 <= 0.0 && std::abs(d) > std::abs(3.0 * del0))
            d = 3.0 * del0;
        return d;
    }

    double eval(double v, int order) const
    {
        const std::size_t i = detail::locate(x_, v);
        const double h = x_[i + 1] - x_[i];
        const double s = (v - x_[i]) / h;
        const double y0 = y_[i], y1 = y_[i + 1], d0 = d_[i] * h, d1 = d_[i + 1] * h;
        if (order == 0) {
            const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
            const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
            return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
        }
        const double g00 = 6 * s * s - 6 * s, g10 = 3 * s * s - 4 * s + 1;
        const double g01 = -6 * s * s + 6 * s, g11 = 3 * s * s - 2 * s;
        return (g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1) / h;
    }

    std::vector<double> x_, y_, d_;
};

// Natural cubic spline.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
    {
        detail::check_knots(x_, y_, "CubicSpline");
        const std::size_t n = x_.size();
        m_.assign(n, 0.0);
        if (n < 3)
            return;
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        }
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    }

    double operator()(double v) const
    {
        const std::size_t i = detail::locate(x_, v);
        const double h = x_[i + 1] - x_[i];
        const double A = (x_[i + 1] - v) / h, B = (v - x_[i]) / h;
        return A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    }

    double derivative(double v) const
    {
        const std::size_t i = detail::locate(x_, v);
        const double h = x_[i + 1] - x_[i];
        const double A = (x_[i + 1] - v) / h, B = (v - x_[i]) / h;
        return (y_[i + 1] - y_[i]) / h + ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
    }

    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;
};

// Quintic Hermite on a uniform grid from values, first and second derivatives.
class QuinticHermiteTable {
public:
    QuinticHermiteTable() = default;
    QuinticHermiteTable(double x0, double h, std::vector<double> f, std::vector<double> d1, std::vector<double> d2)
        : x0_(x0), h_(h), f_(std::move(f)), d1_(std::move(d1)), d2_(std::move(d2))
    {
        if (f_.size() < 2 || d1_.size() != f_.size() || d2_.size() != f_.size() || !(h_ > 0.0))
            throw DomainError("QuinticHermiteTable: inconsistent table");
    }

    double lo() const { return x0_; }
    double hi() const { return x0_ + h_ * static_cast<double>(f_.size() - 1); }

    // Returns value and first derivative.
    std::pair<double, double> eval(double x) const
    {
        if (x < lo() || x > hi())
            throw DomainError("QuinticHermiteTable: argument outside the tabulated range");
        std::size_t i = static_cast<std::size_t>((x - x0_) / h_);
        i = std::min(i, f_.size() - 2);
        const double s = (x - x0_) / h_ - static_cast<double>(i);
        const double p0 = f_[i], p1 = f_[i + 1];
        const double v0 = d1_[i] * h_, v1 = d1_[i + 1] * h_;
        const double a0 = d2_[i] * h_ * h_, a1 = d2_[i + 1] * h_ * h_;
        const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
        const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
        const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
        const double H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
        const double H3 = 0.5 * (s3 - 2 * s4 + s5);
        const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
        const double H5 = 10 * s3 - 15 * s4 + 6 * s5;
        const double dH0 = -30 * s2 + 60 * s3 - 30 * s4;
        const double dH1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
        const double dH2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
        const double dH3 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
        const double dH4 = -12 * s2 + 28 * s3 - 15 * s4;
        const double dH5 = 30 * s2 - 60 * s3 + 30 * s4;
        const double val = H0 * p0 + H1 * v0 + H2 * a0 + H3 * a1 + H4 * v1 + H5 * p1;
        const double der = (dH0 * p0 + dH1 * v0 + dH2 * a0 + dH3 * a1 + dH4 * v1 + dH5 * p1) / h_;
        return {val, der};
    }

private:
    double x0_ = 0.0, h_ = 1.0;
    std::vector<double> f_, d1_, d2_;
};

} // namespace rgsym

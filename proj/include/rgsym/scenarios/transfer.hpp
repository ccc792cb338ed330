#pragma once
#include <cmath>

#include "rgsym/group/core.hpp"
#include "rgsym/numerics/errors.hpp"

namespace rgsym {

struct TransferConfig {
    double alpha0 = 1.0;
    double nu = 1.0;
    double beta = 0.0;
    double depth_max = 5.0;

    bool linear() const { return nu != 0.0; }

    void validate() const
    {
        if (!(alpha0 >= 0.0) || !(nu >= 0.0) || !(beta >= 0.0))
            throw ConfigError("transfer: alpha0, nu and beta must be nonnegative");
        if ((nu != 0.0) == (beta != 0.0))
            throw ConfigError("transfer: exactly one of nu and beta must be nonzero");
        if (!(depth_max > 0.0))
            throw ConfigError("transfer: depth_max must be positive");
    }
};

namespace detail {
inline void check_depth(const TransferConfig& c, double lambda)
{
    if (!(lambda >= 0.0) || lambda > c.depth_max)
        throw DomainError("transfer: depth outside [0, depth_max]");
}
} // namespace detail

inline double transfer_rg(const TransferConfig& c, double lambda)
{
    c.validate();
    detail::check_depth(c, lambda);
    if (c.linear())
        return c.alpha0 * std::exp(-c.nu * lambda);
    return c.alpha0 / (1.0 + c.beta * c.alpha0 * lambda);
}

// First order in the depth; may go negative past the range of validity.
inline double transfer_pt(const TransferConfig& c, double lambda)
{
    c.validate();
    detail::check_depth(c, lambda);
    if (c.linear())
        return c.alpha0 - c.nu * c.alpha0 * lambda;
    return c.alpha0 - c.beta * c.alpha0 * c.alpha0 * lambda;
}

// A(lambda, alpha) with alpha the boundary value, used for the composition law.
inline double transfer_map(const TransferConfig& c, double lambda, double alpha)
{
    if (c.linear())
        return alpha * std::exp(-c.nu * lambda);
    return alpha / (1.0 + c.beta * alpha * lambda);
}

// |A(l2, A(l1, alpha)) - A(l1 + l2, alpha)|
inline double transfer_composition_defect(const TransferConfig& c, double alpha, double l1, double l2)
{
    return std::abs(transfer_map(c, l2, transfer_map(c, l1, alpha)) - transfer_map(c, l1 + l2, alpha));
}

// Lie generator on {lambda, A}
inline Generator transfer_generator(const TransferConfig& c)
{
    c.validate();
    VariableSpace s({"lambda", "A"});
    if (c.linear())
        return Generator(s, {{"lambda", [](const Point&) { return 1.0; }},
                             {"A", [nu = c.nu](const Point& p) { return -nu * p[1]; }}});
    return Generator(s, {{"lambda", [](const Point&) { return 1.0; }},
                         {"A", [b = c.beta](const Point& p) { return -b * p[1] * p[1]; }}});
}

inline double transfer_lie(const TransferConfig& c, double lambda, const Tolerance& tol = default_lie_tolerance())
{
    detail::check_depth(c, lambda);
    return lie_flow(transfer_generator(c), {0.0, c.alpha0}, lambda, tol)[1];
}

} // namespace rgsym

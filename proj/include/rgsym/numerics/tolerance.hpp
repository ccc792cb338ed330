#pragma once
#include "rgsym/numerics/errors.hpp"

namespace rgsym {

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_iter = 200;

    void validate() const
    {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1)
            throw DomainError("tolerance: abs_tol, rel_tol must be positive and max_iter >= 1");
    }

    static Tolerance tight() { return {1e-14, 1e-14, 400}; }
};

struct Bracket {
    double lo;
    double hi;

    void validate() const
    {
        if (!(lo < hi))
            throw DomainError("bracket: lo must be below hi");
    }
};

} // namespace rgsym

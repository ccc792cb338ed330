#pragma once
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rgsym/numerics/errors.hpp"
#include "rgsym/numerics/ode.hpp"
#include "rgsym/numerics/tolerance.hpp"

namespace rgsym {

using Point = std::vector<double>;
using CoordFn = std::function<double(const Point&)>;

class VariableSpace {
public:
    VariableSpace() = default;
    explicit VariableSpace(std::vector<std::string> names) : names_(std::move(names))
    {
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (names_[i] == names_[j])
                    throw DomainError("VariableSpace: duplicate variable '" + names_[i] + "'");
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }

    bool has(const std::string& n) const { return std::find(names_.begin(), names_.end(), n) != names_.end(); }

    std::size_t index(const std::string& n) const
    {
        auto it = std::find(names_.begin(), names_.end(), n);
        if (it == names_.end())
            throw DomainError("VariableSpace: unknown variable '" + n + "'");
        return static_cast<std::size_t>(it - names_.begin());
    }

    Point point(const std::map<std::string, double>& values) const
    {
        Point p(names_.size());
        for (std::size_t i = 0; i < names_.size(); ++i) {
            auto it = values.find(names_[i]);
            if (it == values.end())
                throw DomainError("VariableSpace: point lacks a value for '" + names_[i] + "'");
            p[i] = it->second;
        }
        if (values.size() != names_.size())
            throw DomainError("VariableSpace: point carries variables outside the space");
        return p;
    }

private:
    std::vector<std::string> names_;
};

// Vector field on a variable space; absent coordinates are zero.
class Generator {
public:
    Generator() = default;
    Generator(VariableSpace space, const std::map<std::string, CoordFn>& coords)
        : space_(std::move(space)), coords_(space_.size())
    {
        for (const auto& [name, fn] : coords)
            coords_[space_.index(name)] = fn;
    }

    const VariableSpace& space() const { return space_; }
    bool has_coord(std::size_t i) const { return static_cast<bool>(coords_.at(i)); }
    double coord(std::size_t i, const Point& p) const { return coords_[i] ? coords_[i](p) : 0.0; }

    Point eval(const Point& p) const
    {
        if (p.size() != space_.size())
            throw DomainError("Generator: point dimension does not match the space");
        Point v(p.size(), 0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (coords_[i])
                v[i] = coords_[i](p);
        return v;
    }

    Generator scaled(double c) const
    {
        Generator g = *this;
        for (auto& fn : g.coords_)
            if (fn)
                fn = [f = fn, c](const Point& p) { return c * f(p); };
        return g;
    }

private:
    VariableSpace space_;
    std::vector<CoordFn> coords_;
};

struct EventRecord {
    std::string name;
    double param;
    Point state;
};

struct LieEvent {
    std::string name;
    std::function<double(const Point&)> fn;
};

struct OrbitTrace {
    std::vector<double> param_samples;
    std::vector<Point> states;
    std::optional<EventRecord> terminal_event;
    OdeSolution<Point> solution;

    const Point& final_state() const { return states.back(); }
    double final_param() const { return param_samples.back(); }
    Point at(double a) const { return solution.at(a); }
};

inline Tolerance default_lie_tolerance() { return {1e-12, 1e-12, 200}; }

inline OrbitTrace integrate_lie(const Generator& gen, const Point& start, double a_max,
                                const Tolerance& tol = default_lie_tolerance(), const LieEvent* event = nullptr)
{
    if (start.size() != gen.space().size())
        throw DomainError("integrate_lie: start point dimension does not match the space");
    auto rhs = [&gen](double, const Point& y, Point& dy) {
        for (std::size_t i = 0; i < y.size(); ++i)
            dy[i] = gen.coord(i, y);
    };
    OdeOptions opt = OdeOptions::from(tol);
    OrbitTrace tr;
    if (event) {
        auto ev = [event](double, const Point& y) { return event->fn(y); };
        tr.solution = integrate_ode(rhs, start, 0.0, a_max, opt, ev);
    } else {
        tr.solution = integrate_ode(rhs, start, 0.0, a_max, opt);
    }
    tr.param_samples = tr.solution.params;
    tr.states = tr.solution.states;
    if (tr.solution.event)
        tr.terminal_event = EventRecord{event->name, tr.solution.event->param, tr.solution.event->state};
    return tr;
}

inline Point lie_flow(const Generator& gen, const Point& start, double a, const Tolerance& tol = default_lie_tolerance())
{
    OdeOptions opt = OdeOptions::from(tol);
    opt.dense = false;
    opt.record_steps = false;
    auto rhs = [&gen](double, const Point& y, Point& dy) {
        for (std::size_t i = 0; i < y.size(); ++i)
            dy[i] = gen.coord(i, y);
    };
    return integrate_ode(rhs, start, 0.0, a, opt).final_state;
}

// max-norm of flow(b, flow(a, P)) - flow(a + b, P)
inline double check_group_law(const Generator& gen, const Point& start, double a, double b,
                              const Tolerance& tol = default_lie_tolerance())
{
    const Point composed = lie_flow(gen, lie_flow(gen, start, a, tol), b, tol);
    const Point direct = lie_flow(gen, start, a + b, tol);
    double d = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i)
        d = std::max(d, std::abs(composed[i] - direct[i]));
    return d;
}

inline double default_step(double value) { return std::max(1e-5, 1e-5 * std::abs(value)); }

// max over points of |X J| by central differences.
inline double invariant_defect(const Generator& gen, const std::function<double(const Point&)>& J,
                               const std::vector<Point>& points)
{
    double worst = 0.0;
    for (const auto& p : points) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!gen.has_coord(i))
                continue;
            const double c = gen.coord(i, p);
            if (c == 0.0)
                continue;
            const double h = default_step(p[i]);
            Point pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            s += c * (J(pp) - J(pm)) / (2.0 * h);
        }
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

// A candidate solution surface u = W(independent variables).
struct SolutionSampler {
    std::vector<std::string> independent;
    std::vector<std::string> dependent;
    std::function<std::vector<double>(const std::vector<double>&)> evaluate;
    std::vector<double> steps; // per independent variable; empty selects default_step
    std::function<bool(const std::vector<double>&)> in_domain;
    int order = 2; // 2 or 4 for first and pure second derivatives

    double step(std::size_t i, const std::vector<double>& p) const
    {
        if (!steps.empty()) {
            if (!(steps.at(i) > 0.0))
                throw DomainError("SolutionSampler: stencil steps must be positive");
            return steps[i];
        }
        return default_step(p[i]);
    }

    std::vector<double> sample(const std::vector<double>& p) const
    {
        if (in_domain && !in_domain(p))
            throw StencilOutOfDomain("SolutionSampler: stencil point outside the solution domain");
        try {
            return evaluate(p);
        } catch (const StencilOutOfDomain&) {
            throw;
        } catch (const Error& e) {
            throw StencilOutOfDomain(std::string("SolutionSampler: evaluation failed on the stencil: ") + e.what());
        }
    }

    // d W / d independent[i]
    std::vector<double> first(const std::vector<double>& p, std::size_t i) const
    {
        const double h = step(i, p);
        auto at = [&](double k) {
            auto q = p;
            q[i] += k * h;
            return sample(q);
        };
        auto a = at(1), b = at(-1);
        if (order == 4) {
            auto a2 = at(2), b2 = at(-2);
            for (std::size_t k = 0; k < a.size(); ++k)
                a[k] = (8.0 * (a[k] - b[k]) - (a2[k] - b2[k])) / (12.0 * h);
            return a;
        }
        for (std::size_t k = 0; k < a.size(); ++k)
            a[k] = (a[k] - b[k]) / (2.0 * h);
        return a;
    }

    // d^2 W / d independent[i] d independent[j]
    std::vector<double> second(const std::vector<double>& p, std::size_t i, std::size_t j) const
    {
        if (i == j) {
            const double h = step(i, p);
            auto at = [&](double k) {
                auto q = p;
                q[i] += k * h;
                return sample(q);
            };
            auto a = at(1), c = sample(p), b = at(-1);
            if (order == 4) {
                auto a2 = at(2), b2 = at(-2);
                for (std::size_t k = 0; k < a.size(); ++k)
                    a[k] = (16.0 * (a[k] + b[k]) - 30.0 * c[k] - (a2[k] + b2[k])) / (12.0 * h * h);
                return a;
            }
            for (std::size_t k = 0; k < a.size(); ++k)
                a[k] = (a[k] - 2.0 * c[k] + b[k]) / (h * h);
            return a;
        }
        const double hi = step(i, p), hj = step(j, p);
        auto corner = [&](double si, double sj) {
            auto q = p;
            q[i] += si * hi;
            q[j] += sj * hj;
            return sample(q);
        };
        auto pp = corner(1, 1), pm = corner(1, -1), mp = corner(-1, 1), mm = corner(-1, -1);
        for (std::size_t k = 0; k < pp.size(); ++k)
            pp[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * hi * hj);
        return pp;
    }
};

// X(u - W) on the surface u = W, derivatives of W by central differences.
// Returns the largest component over the dependent variables.
inline double invariance_residual(const Generator& gen, const SolutionSampler& sampler, const std::vector<double>& point)
{
    const auto& space = gen.space();
    if (point.size() != sampler.independent.size())
        throw DomainError("invariance_residual: point dimension does not match the sampler");
    std::vector<std::size_t> ind(sampler.independent.size()), dep(sampler.dependent.size());
    for (std::size_t i = 0; i < ind.size(); ++i)
        ind[i] = space.index(sampler.independent[i]);
    for (std::size_t k = 0; k < dep.size(); ++k)
        dep[k] = space.index(sampler.dependent[k]);
    if (ind.size() + dep.size() != space.size())
        throw DomainError("invariance_residual: sampler variables must cover the generator space");

    for (double h : sampler.steps)
        if (!(h > 0.0))
            throw DomainError("SolutionSampler: stencil steps must be positive");
    const auto W = sampler.sample(point);
    Point P(space.size());
    for (std::size_t i = 0; i < ind.size(); ++i)
        P[ind[i]] = point[i];
    for (std::size_t k = 0; k < dep.size(); ++k)
        P[dep[k]] = W[k];

    std::vector<double> res(dep.size(), 0.0);
    for (std::size_t k = 0; k < dep.size(); ++k)
        res[k] = gen.coord(dep[k], P);
    for (std::size_t i = 0; i < ind.size(); ++i) {
        const double xi = gen.coord(ind[i], P);
        const auto dW = sampler.first(point, i);
        for (std::size_t k = 0; k < dep.size(); ++k)
            res[k] -= xi * dW[k];
    }
    double worst = 0.0;
    for (double r : res)
        worst = std::max(worst, std::abs(r));
    return worst;
}

} // namespace rgsym

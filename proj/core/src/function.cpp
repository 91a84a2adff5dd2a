#include "rpfcone/function.hpp"

#include <cmath>

#include "rpfcone/cheb.hpp"
#include "rpfcone/errors.hpp"

namespace rpfcone {

DiscreteFunction::DiscreteFunction(std::shared_ptr<const Grid> g, std::vector<Complex> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw ValidationError("function needs a grid");
    if (values.size() != grid->size())
        throw ValidationError("value count does not match grid node count");
    for (const Complex& c : values)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw ValidationError("non-finite function value");
}

DiscreteFunction DiscreteFunction::constant(std::shared_ptr<const Grid> g, Complex c) {
    std::vector<Complex> v(g->size(), c);
    return DiscreteFunction(std::move(g), std::move(v));
}

bool DiscreteFunction::is_real(double tol) const {
    for (const Complex& c : values)
        if (std::abs(c.imag()) > tol) return false;
    return true;
}

Complex evaluate(const DiscreteFunction& f, double x) {
    const Grid& g = *f.grid;
    if (g.kind != GridKind::IntervalCollocation)
        throw DomainError("point evaluation needs an interval grid");
    if (x < g.lo || x > g.hi) {
        // Collocation nodes are interior; the natural domain is [0,1] for the
        // standard grid and the node hull for custom ones.
        if (!(g.lo == 0.0 && g.hi == 1.0) || x < 0.0 || x > 1.0)
            throw DomainError("evaluation point outside grid domain");
    }
    return cheb::bary_eval(g.xs, g.bary_w, f.values, x);
}

double sup_norm(const DiscreteFunction& f) {
    double s = 0.0;
    for (const Complex& c : f.values) s = std::max(s, std::abs(c));
    return s;
}

Complex integral(const DiscreteFunction& f) {
    const Grid& g = *f.grid;
    const std::vector<double>& w = (g.kind == GridKind::IntervalCollocation) ? g.quad_w
                                   : (g.kind == GridKind::TowerLevels)       ? g.masses_m
                                                                             : g.masses;
    Complex acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) acc += w[i] * f.values[i];
    return acc;
}

NormReport norm_alpha(const DiscreteFunction& f, double alpha, double xi) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0,1]");
    if (!(xi > 0.0)) throw ValidationError("xi must be positive");
    const Grid& g = *f.grid;
    if (g.size() < 2) throw PreconditionError("norm_alpha needs at least 2 nodes");
    NormReport r;
    r.sup_norm = sup_norm(f);
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = g.distance(i, j);
            if (!(d > 0.0) || !(d < xi)) continue;
            double q = std::abs(f.values[i] - f.values[j]) / std::pow(d, alpha);
            r.seminorm = std::max(r.seminorm, q);
        }
    r.total = r.sup_norm + r.seminorm;
    return r;
}

NormReport norm_tower(const DiscreteFunction& f) {
    const Grid& g = *f.grid;
    if (g.kind != GridKind::TowerLevels)
        throw ValidationError("norm_tower needs a tower grid");
    NormReport r;
    r.sup_norm = sup_norm(f);
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!g.same_floor(i, j)) continue;
            double d = g.distance(i, j);
            if (!(d > 0.0)) continue;
            r.seminorm = std::max(r.seminorm, std::abs(f.values[i] - f.values[j]) / d);
        }
    r.total = std::max(r.sup_norm, r.seminorm);
    return r;
}

}  // namespace rpfcone

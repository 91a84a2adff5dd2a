#include "rpfcone/functional.hpp"

#include <cmath>

#include "rpfcone/errors.hpp"

namespace rpfcone {

LinearFunctional LinearFunctional::point_eval(std::size_t node, const std::string& label) {
    LinearFunctional s;
    s.label = label;
    s.point_terms.emplace_back(node, 1.0);
    return s;
}

LinearFunctional LinearFunctional::from_dense(std::vector<double> row, const std::string& label) {
    LinearFunctional s;
    s.label = label;
    s.dense = std::move(row);
    return s;
}

double LinearFunctional::dual_norm(const Grid& g) const {
    const std::vector<double>& w = (g.kind == GridKind::IntervalCollocation) ? g.quad_w
                                   : (g.kind == GridKind::TowerLevels)       ? g.masses_m
                                                                             : g.masses;
    std::vector<double> row(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) row[i] = quad_coeff * w[i];
    for (const auto& [i, c] : point_terms) row[i] += c;
    if (!dense.empty())
        for (std::size_t i = 0; i < g.size(); ++i) row[i] += dense[i];
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    return s;
}

Complex apply(const LinearFunctional& s, const DiscreteFunction& f) {
    Complex acc = 0.0;
    if (s.quad_coeff != 0.0) acc += s.quad_coeff * integral(f);
    for (const auto& [i, c] : s.point_terms) acc += c * f.values[i];
    if (!s.dense.empty()) {
        if (s.dense.size() != f.values.size())
            throw ValidationError("dense functional row length mismatch");
        for (std::size_t i = 0; i < s.dense.size(); ++i) acc += s.dense[i] * f.values[i];
    }
    return acc;
}

FunctionalFamily::FunctionalFamily(std::shared_ptr<const Grid> g,
                                   std::vector<LinearFunctional> fs)
    : grid(std::move(g)), items(std::move(fs)) {
    if (!grid) throw ValidationError("functional family needs a grid");
    if (items.empty()) throw ValidationError("functional family must be nonempty");
}

std::vector<Complex> FunctionalFamily::evaluate_all(const DiscreteFunction& f) const {
    if (f.grid.get() != grid.get() && f.grid->size() != grid->size())
        throw ValidationError("function grid does not match family grid");
    const Complex I = integral(f);
    std::vector<Complex> out(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) {
        const LinearFunctional& s = items[k];
        Complex acc = s.quad_coeff * I;
        for (const auto& [i, c] : s.point_terms) acc += c * f.values[i];
        if (!s.dense.empty())
            for (std::size_t i = 0; i < s.dense.size(); ++i) acc += s.dense[i] * f.values[i];
        out[k] = acc;
    }
    return out;
}

FunctionalFamily pointwise_family(std::shared_ptr<const Grid> g) {
    std::vector<LinearFunctional> fs;
    fs.reserve(g->size());
    for (std::size_t i = 0; i < g->size(); ++i)
        fs.push_back(LinearFunctional::point_eval(i));
    return FunctionalFamily(std::move(g), std::move(fs));
}

}  // namespace rpfcone

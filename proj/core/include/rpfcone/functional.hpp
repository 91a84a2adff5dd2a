#pragma once

// Linear functionals over a grid and finite families of them. A functional is
// stored in structured form: a multiple of the reference-measure integral plus
// a short list of point terms (plus an optional dense row for odd cases).
// Families can then be evaluated on a function in O(size + terms) sharing the
// integral, which matters for cone families with ~10^6 members.

#include <string>
#include <utility>
#include <vector>

#include "rpfcone/function.hpp"

namespace rpfcone {

struct LinearFunctional {
    std::string label;
    double quad_coeff = 0.0;  // multiplies integral(f)
    std::vector<std::pair<std::size_t, double>> point_terms;
    std::vector<double> dense;  // optional; same length as the grid if present

    static LinearFunctional point_eval(std::size_t node, const std::string& label = "point-eval");
    static LinearFunctional from_dense(std::vector<double> row, const std::string& label = "dense");

    // Dual norm with respect to the sup norm: l1 mass of the coefficient row.
    double dual_norm(const Grid& g) const;
};

Complex apply(const LinearFunctional& s, const DiscreteFunction& f);

struct FunctionalFamily {
    std::shared_ptr<const Grid> grid;
    std::vector<LinearFunctional> items;

    FunctionalFamily() = default;
    FunctionalFamily(std::shared_ptr<const Grid> g, std::vector<LinearFunctional> fs);

    std::size_t size() const { return items.size(); }

    // Values of every functional on f, computing integral(f) once.
    std::vector<Complex> evaluate_all(const DiscreteFunction& f) const;
};

// Coordinate cone on a grid: one point evaluation per node (the quadrant cone
// when the grid has two nodes).
FunctionalFamily pointwise_family(std::shared_ptr<const Grid> g);

}  // namespace rpfcone

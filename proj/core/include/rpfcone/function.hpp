#pragma once

// Functions represented by values on grid nodes, with the sup/seminorm
// machinery used throughout.

#include <complex>
#include <memory>
#include <vector>

#include "rpfcone/grid.hpp"

namespace rpfcone {

using Complex = std::complex<double>;

struct DiscreteFunction {
    std::shared_ptr<const Grid> grid;
    std::vector<Complex> values;

    DiscreteFunction() = default;
    DiscreteFunction(std::shared_ptr<const Grid> g, std::vector<Complex> v);
    static DiscreteFunction constant(std::shared_ptr<const Grid> g, Complex c);
    bool is_real(double tol = 0.0) const;
};

struct NormReport {
    double sup_norm = 0.0;
    double seminorm = 0.0;
    double total = 0.0;
};

// Interpolated value at a point of an interval grid (exact at nodes).
Complex evaluate(const DiscreteFunction& f, double x);

double sup_norm(const DiscreteFunction& f);

// Integral of f against the grid's reference measure (Lebesgue for interval
// grids, cell masses for symbolic grids, m = v*m0 for towers).
Complex integral(const DiscreteFunction& f);

// Holder norm: sup norm plus sup over node pairs with 0 < d < xi of
// |f(x)-f(y)| / d(x,y)^alpha; total is the sum.
NormReport norm_alpha(const DiscreteFunction& f, double alpha, double xi);

// Tower Lipschitz norm: same-floor pairs only; total = max(sup, seminorm).
NormReport norm_tower(const DiscreteFunction& f);

}  // namespace rpfcone

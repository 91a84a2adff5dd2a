#pragma once

// Observables u used to twist the transfer operators. Named analytic kinds
// keep branch sums exact (interpolating x^{-2z}-type factors would lose the
// accuracy budget near 0); a nodal fallback covers everything else.

#include <array>

#include "rpfcone/function.hpp"

namespace rpfcone {

class Potential {
public:
    enum class Kind { Zero, Constant, LogX, Coordinate, FirstSymbol, Nodal };

    static Potential zero();
    static Potential constant(double c);
    static Potential log_x(double coef);  // u(x) = coef * ln(x); Gauss observable has coef -2
    static Potential coordinate();        // u(x) = x
    static Potential first_symbol(std::vector<double> symbol_values);  // cylinder grids
    static Potential nodal(DiscreteFunction table);

    Kind kind() const { return kind_; }

    // Point evaluation on interval stages.
    double eval(double x) const;

    // Values at the nodes of a grid.
    std::vector<double> values_on(const std::shared_ptr<const Grid>& g) const;

    // sup |u| over grid nodes (the artifact's stand-in for the sup norm).
    double sup_on(const std::shared_ptr<const Grid>& g) const;

    // Coefficient of the ln(x) singularity at 0 (0 for regular kinds).
    double log_coef() const;

    // Taylor data {u_r(0), u_r'(0), u_r''(0)} of the regular part
    // u(x) = log_coef*ln(x) + u_r(x), used in branch-tail corrections.
    std::array<double, 3> regular_jet(const std::shared_ptr<const Grid>& g) const;

private:
    Kind kind_ = Kind::Zero;
    double c0_ = 0.0;
    double log_coef_ = 0.0;
    std::vector<double> symbol_values_;
    DiscreteFunction table_;
};

}  // namespace rpfcone

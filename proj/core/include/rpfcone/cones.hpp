#pragma once

// Concrete cone families: the tower cone cut out by averaging/Lipschitz/
// pointwise functionals, and log-Holder cones for covering maps, together
// with invariance, domination, and perturbation-radius utilities.

#include <cstdint>
#include <random>

#include "rpfcone/projective.hpp"
#include "rpfcone/transfer.hpp"

namespace rpfcone {

struct TowerConeParams {
    double a = 0.0, b = 0.0, c = 0.0;  // 0 => choose defaults from the data
    double eps0 = 0.1;                 // mass budget for the exceptional set
    // Derived during family construction:
    double gamma_s = 0.0;  // diameter bound of the partition cells
    double c1 = 0.0, c2 = 0.0, D = 0.0;
    int level_cutoff = 0;  // cells at levels >= cutoff form the exceptional set
};

struct TowerConeFamily {
    FunctionalFamily family;
    TowerConeParams params;
    DiscreteFunction h;                   // reference eigenfunction 1/v
    std::vector<std::size_t> p1_nodes;    // partition cells (one node each)
    std::vector<std::size_t> p2_nodes;    // exceptional-set nodes
};

// Reference density h = 1/v on a tower grid (so that h dm = m0).
DiscreteFunction tower_reference_h(const std::shared_ptr<const TowerStage>& tower);

// Averaging functionals Y_P and a*I - Y_P per partition cell, Lipschitz pair
// functionals b*I -/+ (f(x)-f(y))/d over all same-floor node pairs, and
// pointwise functionals c*I +- f(x) on the exceptional set.
TowerConeFamily tower_functional_family(TowerConeParams params,
                                        const std::shared_ptr<const TowerStage>& tower);

// Random strictly interior element of the tower cone (a perturbation of h).
DiscreteFunction sample_tower_cone_element(const TowerConeFamily& cone, std::mt19937_64& rng,
                                           double amplitude = 0.25);

struct LogHolderConeParams {
    double s = 4.0, Q = 1.0, alpha = 1.0, xi = 2.0;
    double s_prime(double gamma) const { return s / gamma + 1.0; }
    // Projective diameter of the improved cone inside the original one,
    // using the pointwise comparability constant C = e^{sQ}.
    double d0(double gamma) const;
};

struct LogHolderMembership {
    bool member = false;
    FunctionalFamily family;
};

// Nonnegativity plus the log-Holder ratio bound f(x) <= e^{sQ d^alpha} f(x')
// over node pairs with d < xi; also returns the defining functional family.
LogHolderMembership logholder_membership(const LogHolderConeParams& params,
                                         const DiscreteFunction& f);

FunctionalFamily logholder_family(const LogHolderConeParams& params,
                                  const std::shared_ptr<const Grid>& grid);

DiscreteFunction sample_logholder_element(const LogHolderConeParams& params,
                                          const std::shared_ptr<const Grid>& grid,
                                          std::mt19937_64& rng);

struct InvarianceReport {
    bool all_inside = true;
    std::size_t failures = 0;
    double worst_margin = Grid::inf;  // min scaled functional value over images
    double image_diameter = 0.0;      // max d_{cone_out} over sampled image pairs
};

// Applies the window (which must be at z = 0) to each sample member and
// checks membership in cone_out; measures the image diameter over pairs
// (capped at max_pairs to bound runtime).
InvarianceReport invariance_check(const FunctionalFamily& cone_out, const TwistWindow& window,
                                  const std::vector<DiscreteFunction>& sample,
                                  std::size_t max_pairs = 2000);

struct DominationReport {
    double epsilon = 0.0;        // smallest valid ratio bound over sample x family
    double delta_eps = 0.0;      // 2 eps (1 + cosh(d0/2))
    bool contraction_ok = false; // delta_eps < 1
    double analytic_bound = 0.0; // |z| (2 ||S u||_inf + 3/(s-1)), covering maps
};

DominationReport domination_epsilon(const FunctionalFamily& S, const TwistWindow& window_z,
                                    const std::vector<DiscreteFunction>& sample, double d0,
                                    double s_cone = 0.0);

struct PerturbationRadius {
    double r = 0.0;        // radius at margin 1/2, so delta_r = 1/2
    double delta_r = 0.5;
    double d1 = 0.0;       // certified image diameter d0 + 6|ln(1-delta_r)|
};

PerturbationRadius perturbation_radius(double C0, double d0);

// Shift R(f) with f + R(f) h in the complex cone; complex f handled
// componentwise.
Complex reproducing_shift(const TowerConeFamily& cone, const DiscreteFunction& f);

}  // namespace rpfcone

#pragma once

// Real Hilbert projective metric and its complex counterpart for cones cut out
// by finite families of linear functionals, plus aperture and contraction
// utilities.

#include "rpfcone/functional.hpp"

namespace rpfcone {

// Relative slack on functional nonnegativity so round-off cannot eject
// boundary elements.
constexpr double kConeTol = 1e-12;

bool real_cone_contains(const FunctionalFamily& S, const DiscreteFunction& f);

// sup over s in S with s(f) > 0 of s(g)/s(f) == inf{t > 0 : t f - g in cone};
// +infinity when some s has s(f) = 0 < s(g).
double beta_gauge(const FunctionalFamily& S, const DiscreteFunction& f,
                  const DiscreteFunction& g);

// ln(beta(f,g) * beta(g,f)); 0 iff f and g are positively proportional.
double hilbert_distance(const FunctionalFamily& S, const DiscreteFunction& f,
                        const DiscreteFunction& g);

// tanh(D/4) with tanh(inf) = 1.
double birkhoff_contraction_bound(double D);

// Canonical complexification test: Re(conj(mu(f)) nu(f)) >= 0 for all pairs,
// evaluated as an angular-sector test on the functional values.
bool complex_cone_contains(const FunctionalFamily& S, const DiscreteFunction& f);

enum class RegionKind { Empty, Disc, DiscComplement, HalfPlane, Plane };

struct RegionWitness {
    std::size_t mu = 0, nu = 0;
    RegionKind kind = RegionKind::Empty;
    double inf_mod = 0.0, sup_mod = 0.0;
};

struct ExclusionBounds {
    double a = 0.0;  // smallest modulus over the exclusion set
    double b = 0.0;  // largest modulus
    bool collinear = false;
    bool empty_union = false;
    std::vector<RegionWitness> witnesses;  // nontrivial regions, capped
};

// Closed-form per-pair failure regions of {z : z*x - y outside the cone};
// a/b are the extreme moduli of their union.
ExclusionBounds exclusion_set_bounds(const FunctionalFamily& S, const DiscreteFunction& x,
                                     const DiscreteFunction& y, bool keep_witnesses = true);

// ln(b/a) with ln(inf)=inf and a=0 => inf; 0 for collinear inputs.
double delta_distance(const FunctionalFamily& S, const DiscreteFunction& x,
                      const DiscreteFunction& y);

struct ApertureReport {
    double K = 0.0;            // smallest K with ||f|| * ||mu|| <= K mu(f) over the sample
    double complexified = 0.0; // 2*sqrt(2)*K
    double mu_norm = 0.0;
};

ApertureReport aperture_constant(const FunctionalFamily& S, const LinearFunctional& mu,
                                 const std::vector<DiscreteFunction>& sample);

}  // namespace rpfcone

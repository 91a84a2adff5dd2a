#pragma once

// Statistics extracted from the leading-eigenvalue curve z -> lambda(z):
// windowed pressure sampling, mean/variance by Cauchy-circle and
// finite-difference derivatives, an empirical CLT harness, and independent
// oracles (dense eigensolve, tanh-sinh quadrature).

#include <cstdint>
#include <functional>
#include <string>

#include "rpfcone/rpf.hpp"

namespace rpfcone {

using WindowFactory = std::function<TwistWindow(Complex z)>;

struct PressureCurve {
    double rho = 0.0;
    int window_length = 1;
    std::vector<Complex> circle_z;     // K points on |z| = rho, anchored at +rho
    std::vector<Complex> circle_vals;  // n^{-1} log lambda_{j,n}(z), continuous branch
    std::vector<double> segment_t;     // {-h, 0, +h} with h = rho/8
    std::vector<double> segment_vals;
    std::vector<std::string> failures;  // per-sample solver failure annotations
};

// Solves the RPF problem at each sample of the circle |z| = rho (plus a short
// real segment for finite differences) and records the windowed pressure.
PressureCurve pressure_samples(const WindowFactory& make_window, double rho, int k_points,
                               const RPFConfig& cfg = {});

struct MomentEstimates {
    double mean = 0.0;       // pressure'(0), Cauchy-circle value
    double variance = 0.0;   // pressure''(0), Cauchy-circle value
    double mean_fd = 0.0;    // central finite differences, step rho/8
    double variance_fd = 0.0;
    double cross_error = 0.0;  // worst disagreement between the two methods
};

// Both derivative extractions, cross-checked; disagreement beyond cross_tol
// raises a ConvergenceError (the curve was not resolved well enough).
MomentEstimates lambda_derivatives(const PressureCurve& curve, double cross_tol = 1e-4);

enum class CltModel { BernoulliFirstSymbol, GaussLogDerivative, ConstantObservable };

struct CltParams {
    CltModel model = CltModel::BernoulliFirstSymbol;
    int n = 1000;
    int trials = 10000;
    std::uint64_t seed = 0;
    double mean = 0.0;      // centering, from lambda_derivatives
    double variance = 0.0;  // scaling, from lambda_derivatives
    double constant_c = 0.0;  // observable value for ConstantObservable
};

struct CltReport {
    int trials = 0, n = 0;
    std::vector<double> standardized;  // sorted (S_n - n mean)/sqrt(n variance)
    double ks = 0.0;                   // Kolmogorov-Smirnov distance to N(0,1)
    double empirical_mean_rate = 0.0;  // sample mean of S_n / n
    double empirical_variance = 0.0;   // sample variance of the standardized sums
};

// Per-trial seeds derived from (seed, trial index); reduction order fixed, so
// identical parameters give bit-identical reports.
CltReport monte_carlo_clt(const CltParams& p);

// KS distance between a sorted sample and the standard normal law.
double ks_to_standard_normal(const std::vector<double>& sorted_sample);

struct SpectrumOracle {
    std::vector<Complex> eigenvalues;  // sorted by decreasing modulus
    DiscreteFunction leading;          // eigenvector of the top eigenvalue, integral 1
};

// Dense eigendecomposition of the untwisted collocated Gauss operator — an
// oracle independent of the power-iteration solver.
SpectrumOracle gauss_spectrum_oracle(int nodes, long truncation_N = 10000);

// Tanh-sinh quadrature of f over (0, 1); handles endpoint log singularities.
double integrate_tanh_sinh(const std::function<double(double)>& f, int levels = 12);

// Lyapunov exponent of the Gauss map under its invariant density, by
// quadrature of -2 ln x / (ln 2 (1+x)).
double gauss_lyapunov_oracle();

}  // namespace rpfcone

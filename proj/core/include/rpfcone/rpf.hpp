#pragma once

// Dominant triplets (lambda_j, h_j, nu_j) of twisted transfer-operator
// windows, by forward/backward power iteration with per-stage renormalization.

#include "rpfcone/transfer.hpp"

namespace rpfcone {

enum class BoundaryMode { Periodic, Truncated };
enum class NormalizationMode { Covering, Tower };

struct RPFConfig {
    BoundaryMode boundary = BoundaryMode::Periodic;
    double tol = 1e-13;
    int max_iters = 10000;
    double lambda_floor = 1e-8;
};

struct RPFTriplet {
    std::vector<Complex> lambda;              // per stage j = 0..P-1
    std::vector<DiscreteFunction> h;          // h_j; cyclically h_{j+P} = h_j
    std::vector<std::vector<Complex>> nu;     // dual quadrature weights per stage
    NormalizationMode normalization = NormalizationMode::Covering;
    std::vector<double> trace;                // per-cycle iteration residuals

    Complex lambda_product() const;
};

RPFTriplet solve_rpf(const TwistWindow& w, const RPFConfig& cfg = {});

struct ResidualRow {
    double eigen_eq = 0.0;  // ||L_j h_j - lambda_j h_{j+1}||_inf
    double dual_eq = 0.0;   // sup_g |nu_{j+1}(L_j g) - lambda_j nu_j(g)| / ||g||_inf
    double norm_dev = 0.0;  // worst normalization deviation
};

std::vector<ResidualRow> rpf_residuals(const RPFTriplet& t, const TwistWindow& w);

struct ConvergenceReport {
    std::vector<double> residuals;  // n = 1..n_max
    double rate = 0.0;              // fitted decay per step
    double prefactor = 0.0;
    double r2 = 0.0;                // fit quality on the log scale
    int fitted_points = 0;
    bool noise_floor_truncated = false;
};

// Residuals ||L_z^{0,n} g / lambda_{0,n} - nu_0(g) h_n||_inf with a
// least-squares geometric fit, truncated at the numeric noise floor.
ConvergenceReport convergence_rate(const TwistWindow& w, const DiscreteFunction& g,
                                   const RPFTriplet& t, int n_max);

}  // namespace rpfcone

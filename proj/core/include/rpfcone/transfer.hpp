#pragma once

// Discretized transfer operators: plain branch-sum operators, the
// level-weighted tower operator, complex twists, window compositions, and the
// Lasota-Yorke verifier.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "rpfcone/potential.hpp"
#include "rpfcone/systems.hpp"

namespace rpfcone {

struct TransferStage {
    std::shared_ptr<const SystemStage> stage;
    bool tower_weighted = false;  // apply L = L0(. v)/v rather than plain L0
    long truncation_N = 10000;
    double tail_budget = 1e-3;  // per-application cap on the certified tail
};

struct ApplyReport {
    double tail_bound = 0.0;  // bound on the omitted-branch error per unit sup norm
};

// One stage at one twist parameter, materialized as a matrix on the stage
// grid (dense for collocation/cylinder grids, sparse for towers).
class StageOperator {
public:
    StageOperator(TransferStage ts, const Potential& u, Complex z);

    const TransferStage& config() const { return ts_; }
    Complex z() const { return z_; }
    std::shared_ptr<const Grid> grid() const { return ts_.stage->grid(); }
    double tail_bound() const { return tail_; }

    DiscreteFunction apply(const DiscreteFunction& f, ApplyReport* report = nullptr) const;
    // nu -> nu . M (dual action on quadrature rows).
    std::vector<Complex> apply_adjoint(const std::vector<Complex>& nu) const;

    Eigen::MatrixXcd dense() const;

private:
    TransferStage ts_;
    Complex z_;
    bool sparse_mode_ = false;
    Eigen::MatrixXcd dense_;
    Eigen::SparseMatrix<Complex> sparse_;
    double tail_ = 0.0;

    void build_interval(const Potential& u);
    void build_shift(const Potential& u);
    void build_tower(const Potential& u);
};

DiscreteFunction apply_L0(const TransferStage& ts, const DiscreteFunction& f,
                          ApplyReport* report = nullptr);
DiscreteFunction apply_Lz(const TransferStage& ts, const Potential& u, Complex z,
                          const DiscreteFunction& f, ApplyReport* report = nullptr);

struct TwistWindow {
    std::vector<TransferStage> stages;      // applied left to right (index j first)
    std::vector<Potential> potentials;      // one per stage
    Complex z = 0.0;
    double alpha = 1.0;                     // Holder class exponent for norms
};

DiscreteFunction compose_window(const TwistWindow& w, const DiscreteFunction& f,
                                ApplyReport* report = nullptr);

double birkhoff_sum(const std::vector<std::shared_ptr<const SystemStage>>& stages,
                    const std::vector<Potential>& u, std::size_t j, int n, double x);

struct LYReport {
    double lhs = 0.0, rhs = 0.0;
    bool holds = false;
    double sup_L0_one = 0.0, sup_birkhoff = 0.0, Q = 0.0;
};

// Checks ||L_z^{j,n} f||_{alpha,xi} against the sequential Lasota-Yorke bound
// ||L0^{j,n} 1||_inf e^{|Re z| ||S u||_inf} (v(f) gamma^{-alpha floor(n/n0)}
//   + (1+2Q)(1+|Re z|+|Im z|) ||f||_inf).
LYReport lasota_yorke_report(const TwistWindow& w, const DiscreteFunction& f);

}  // namespace rpfcone

#pragma once

// Concrete countable-branch systems: the Gauss map, piecewise expanding
// interval maps, full shifts over a finite alphabet, and towers with
// exponential return-time tails.

#include <memory>

#include "rpfcone/function.hpp"

namespace rpfcone {

struct Branch {
    double y = 0.0;          // branch inverse of the stage map at x
    double log_weight = 0.0; // value of the stage potential at y
    long index = 0;
};

class SystemStage {
public:
    enum class Kind { Gauss, Interval, FullShift, Tower };

    virtual ~SystemStage() = default;
    virtual Kind kind() const = 0;
    virtual std::shared_ptr<const Grid> grid() const = 0;
    virtual double xi() const = 0;
    virtual double gamma() const = 0;
    virtual int n0() const = 0;
    // Declared Holder constant of the stage's log-weights over paired
    // preimages (used by the Lasota-Yorke verifier).
    virtual double holder_Q() const { return 1.0; }

    // Interval-type stages (Gauss, interval maps): branch-inverse enumeration
    // with a certified bound on the total omitted weight, and the forward map.
    virtual std::vector<Branch> branches(double x, long N) const;
    virtual double tail_bound(long N) const;
    virtual double forward(double x) const;

    // Full-shift stages: raw per-symbol weights.
    virtual const std::vector<double>& symbol_weights() const;

    int index = 0;
};

std::shared_ptr<const SystemStage> gauss_stage(int nodes = 64);

struct IntervalBranch {
    double lo = 0.0, hi = 1.0;  // branch domain [lo, hi), mapped affinely onto [0,1)
    double log_weight = 0.0;    // constant per branch
};

std::shared_ptr<const SystemStage> interval_stage(const std::vector<IntervalBranch>& branches,
                                                  int nodes = 64);
std::shared_ptr<const SystemStage> doubling_stage(int nodes = 64);

std::shared_ptr<const SystemStage> full_shift_stage(const std::vector<double>& symbol_weights,
                                                    int depth = 8);

struct TowerSpec {
    std::vector<double> atom_masses;  // base-atom masses, summing to 1
    std::vector<int> return_times;    // R per atom
    double beta = 0.5;                // separation metric base
    double q = 1.0, p = 0.6931471805599453;  // tail bound m0{R > n} <= q e^{-p n}
    int r_max = 20;
    int k_depth = 2;
};

class TowerStage : public SystemStage {
public:
    explicit TowerStage(TowerSpec spec);
    Kind kind() const override { return Kind::Tower; }
    std::shared_ptr<const Grid> grid() const override { return grid_; }
    double xi() const override { return 1.0; }
    double gamma() const override { return 1.0 / spec_.beta; }
    int n0() const override { return 1; }

    const TowerSpec& spec() const { return spec_; }
    double level_weight(int level) const;  // v_l = e^{l p / 2}
    // Total tower mass before normalization (sum of R_j * mass_j).
    double raw_total_mass() const { return total_mass_; }

private:
    TowerSpec spec_;
    std::shared_ptr<const Grid> grid_;
    double total_mass_ = 0.0;
};

std::shared_ptr<const TowerStage> tower_build(const TowerSpec& spec);

// Geometric-tails tower: atoms j = 1..J with return time j and mass ~ 2^{-j}.
TowerSpec geometric_tower_spec(int atoms, int k_depth);

struct PreimagePair {
    double y = 0.0, y_prime = 0.0;
    double distance = 0.0;
    double bound = 0.0;  // gamma^{-floor(n/n0)} * d(x, x')
};

// Aligned n-step preimage pairs of (x, x') under stages j .. j+n-1.
std::vector<PreimagePair> paired_preimages(
    const std::vector<std::shared_ptr<const SystemStage>>& stages, std::size_t j, double x,
    double x_prime, int n, long N);

// Forward orbit x0, T_j x0, T_{j+1}T_j x0, ... of length n+1.
std::vector<double> trajectory(const std::vector<std::shared_ptr<const SystemStage>>& stages,
                               std::size_t j, double x0, int n);

}  // namespace rpfcone

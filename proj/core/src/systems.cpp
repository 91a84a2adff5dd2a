#include "rpfcone/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpfcone/errors.hpp"

namespace rpfcone {

std::vector<Branch> SystemStage::branches(double, long) const {
    throw DomainError("stage has no interval branch enumeration");
}
double SystemStage::tail_bound(long) const {
    throw DomainError("stage has no interval branch enumeration");
}
double SystemStage::forward(double) const {
    throw DomainError("stage has no interval forward map");
}
const std::vector<double>& SystemStage::symbol_weights() const {
    throw DomainError("stage has no symbol weights");
}

namespace {

class GaussStage : public SystemStage {
public:
    explicit GaussStage(int nodes) : grid_(Grid::interval(nodes)) {}
    Kind kind() const override { return Kind::Gauss; }
    std::shared_ptr<const Grid> grid() const override { return grid_; }
    double xi() const override { return 2.0; }
    double gamma() const override { return 2.25; }
    int n0() const override { return 2; }
    double holder_Q() const override { return 2.0; }

    std::vector<Branch> branches(double x, long N) const override {
        if (x < 0.0 || x > 1.0) throw DomainError("gauss branches need x in [0,1]");
        std::vector<Branch> out;
        out.reserve(N);
        for (long n = 1; n <= N; ++n) {
            Branch b;
            b.y = 1.0 / (x + n);
            b.log_weight = -2.0 * std::log(x + n);
            b.index = n;
            out.push_back(b);
        }
        return out;
    }

    double tail_bound(long N) const override { return 1.0 / static_cast<double>(N); }

    double forward(double x) const override {
        if (!(x > 0.0) || x >= 1.0) throw DomainError("gauss forward map needs x in (0,1)");
        double inv = 1.0 / x;
        return inv - std::floor(inv);
    }

private:
    std::shared_ptr<const Grid> grid_;
};

class IntervalStage : public SystemStage {
public:
    IntervalStage(std::vector<IntervalBranch> brs, int nodes)
        : branches_(std::move(brs)), grid_(Grid::interval(nodes)) {
        if (branches_.empty()) throw ValidationError("interval stage needs branches");
        std::sort(branches_.begin(), branches_.end(),
                  [](const IntervalBranch& a, const IntervalBranch& b) { return a.lo < b.lo; });
        double cur = 0.0;
        gamma_ = std::numeric_limits<double>::infinity();
        for (const IntervalBranch& b : branches_) {
            if (std::abs(b.lo - cur) > 1e-14)
                throw ValidationError("interval branches must tile [0,1) without gaps");
            if (!(b.hi > b.lo)) throw ValidationError("empty interval branch");
            double slope = 1.0 / (b.hi - b.lo);
            if (!(slope > 1.0)) throw ValidationError("interval branch must be expanding");
            gamma_ = std::min(gamma_, slope);
            cur = b.hi;
        }
        if (std::abs(cur - 1.0) > 1e-14)
            throw ValidationError("interval branches must cover [0,1)");
    }

    Kind kind() const override { return Kind::Interval; }
    std::shared_ptr<const Grid> grid() const override { return grid_; }
    double xi() const override { return 2.0; }
    double gamma() const override { return gamma_; }
    int n0() const override { return 1; }

    std::vector<Branch> branches(double x, long) const override {
        if (x < 0.0 || x > 1.0) throw DomainError("branches need x in [0,1]");
        std::vector<Branch> out;
        out.reserve(branches_.size());
        for (std::size_t k = 0; k < branches_.size(); ++k) {
            const IntervalBranch& b = branches_[k];
            Branch br;
            br.y = b.lo + (b.hi - b.lo) * x;
            br.log_weight = b.log_weight;
            br.index = static_cast<long>(k);
            out.push_back(br);
        }
        return out;
    }

    double tail_bound(long) const override { return 0.0; }

    double forward(double x) const override {
        for (const IntervalBranch& b : branches_)
            if (x >= b.lo && x < b.hi) return (x - b.lo) / (b.hi - b.lo);
        throw DomainError("point outside [0,1)");
    }

private:
    std::vector<IntervalBranch> branches_;
    std::shared_ptr<const Grid> grid_;
    double gamma_ = 2.0;
};

class FullShiftStage : public SystemStage {
public:
    FullShiftStage(std::vector<double> weights, int depth) : weights_(std::move(weights)) {
        if (weights_.size() < 2) throw ValidationError("shift needs at least 2 symbols");
        double total = 0.0;
        for (double w : weights_) {
            if (!(w > 0.0) || !std::isfinite(w))
                throw ValidationError("shift weights must be positive and finite");
            total += w;
        }
        std::vector<double> masses(weights_.size());
        for (std::size_t s = 0; s < weights_.size(); ++s) masses[s] = weights_[s] / total;
        grid_ = Grid::cylinders(masses, depth, 0.5);
    }

    Kind kind() const override { return Kind::FullShift; }
    std::shared_ptr<const Grid> grid() const override { return grid_; }
    double xi() const override { return 2.0; }
    double gamma() const override { return 2.0; }
    int n0() const override { return 1; }

    const std::vector<double>& symbol_weights() const override { return weights_; }

private:
    std::vector<double> weights_;
    std::shared_ptr<const Grid> grid_;
};

}  // namespace

std::shared_ptr<const SystemStage> gauss_stage(int nodes) {
    return std::make_shared<GaussStage>(nodes);
}

std::shared_ptr<const SystemStage> interval_stage(const std::vector<IntervalBranch>& branches,
                                                  int nodes) {
    return std::make_shared<IntervalStage>(branches, nodes);
}

std::shared_ptr<const SystemStage> doubling_stage(int nodes) {
    double lw = -std::log(2.0);
    return interval_stage({{0.0, 0.5, lw}, {0.5, 1.0, lw}}, nodes);
}

std::shared_ptr<const SystemStage> full_shift_stage(const std::vector<double>& symbol_weights,
                                                    int depth) {
    return std::make_shared<FullShiftStage>(symbol_weights, depth);
}

TowerStage::TowerStage(TowerSpec spec) : spec_(std::move(spec)) {
    const std::size_t J = spec_.atom_masses.size();
    if (J == 0 || spec_.return_times.size() != J)
        throw ValidationError("tower needs matching atom masses and return times");
    if (spec_.k_depth < 1) throw ValidationError("tower needs k_depth >= 1");
    if (!(spec_.beta > 0.0 && spec_.beta < 1.0))
        throw ValidationError("tower beta must lie in (0,1)");
    double total = 0.0;
    int g = 0;
    for (std::size_t j = 0; j < J; ++j) {
        if (!(spec_.atom_masses[j] > 0.0)) throw ValidationError("atom masses must be positive");
        if (spec_.return_times[j] < 1) throw ValidationError("return times must be >= 1");
        if (spec_.return_times[j] > spec_.r_max)
            throw TruncationError("a return time exceeds R_max; tower truncation would drop mass");
        total += spec_.atom_masses[j];
        g = std::gcd(g, spec_.return_times[j]);
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("atom masses must sum to 1");
    if (g != 1) throw ValidationError("return times must have gcd 1");
    for (int n = 0; n <= spec_.r_max; ++n) {
        double tail = 0.0;
        for (std::size_t j = 0; j < J; ++j)
            if (spec_.return_times[j] > n) tail += spec_.atom_masses[j];
        if (tail > spec_.q * std::exp(-spec_.p * n) + 1e-12)
            throw ValidationError("return-time tail violates the declared (q, p) bound");
    }

    // Cells: (level l, word w) with R(w[0]) > l; word depth k_depth.
    auto grid = std::make_shared<Grid>();
    grid->kind = GridKind::TowerLevels;
    grid->n_symbols = static_cast<int>(J);
    grid->depth = spec_.k_depth;
    grid->metric_base = spec_.beta;
    grid->r_max = spec_.r_max;
    grid->k_depth = spec_.k_depth;
    long n_words = 1;
    for (int k = 0; k < spec_.k_depth; ++k) {
        n_words *= static_cast<long>(J);
        if (n_words > 1'000'000) throw ValidationError("tower grid too large");
    }
    int max_r = *std::max_element(spec_.return_times.begin(), spec_.return_times.end());

    // Raw cylinder masses (product of conditionals) and the tower mass.
    std::vector<double> word_mass(n_words, 1.0);
    std::vector<std::vector<int>> word_list(n_words);
    {
        std::vector<int> w(spec_.k_depth, 0);
        for (long idx = 0; idx < n_words; ++idx) {
            double m = 1.0;
            for (int k = 0; k < spec_.k_depth; ++k) m *= spec_.atom_masses[w[k]];
            word_mass[idx] = m;
            word_list[idx] = w;
            for (int k = spec_.k_depth - 1; k >= 0; --k) {
                if (++w[k] < static_cast<int>(J)) break;
                w[k] = 0;
            }
        }
    }
    total_mass_ = 0.0;
    for (std::size_t j = 0; j < J; ++j)
        total_mass_ += spec_.return_times[j] * spec_.atom_masses[j];

    for (int l = 0; l < max_r; ++l) {
        for (long idx = 0; idx < n_words; ++idx) {
            if (spec_.return_times[word_list[idx][0]] <= l) continue;
            grid->levels.push_back(l);
            grid->words.push_back(word_list[idx]);
            double m0 = word_mass[idx] / total_mass_;
            grid->masses.push_back(m0);
            grid->masses_m.push_back(m0 * std::exp(0.5 * spec_.p * l));
        }
    }
    grid_ = grid;
}

double TowerStage::level_weight(int level) const {
    return std::exp(0.5 * spec_.p * level);
}

std::shared_ptr<const TowerStage> tower_build(const TowerSpec& spec) {
    return std::make_shared<TowerStage>(spec);
}

TowerSpec geometric_tower_spec(int atoms, int k_depth) {
    if (atoms < 2) throw ValidationError("geometric tower needs at least 2 atoms");
    TowerSpec spec;
    spec.k_depth = k_depth;
    spec.r_max = atoms;
    spec.q = 1.0;
    spec.p = std::log(2.0);
    for (int j = 1; j <= atoms; ++j) {
        spec.atom_masses.push_back(std::pow(2.0, -j));
        spec.return_times.push_back(j);
    }
    spec.atom_masses.back() += std::pow(2.0, -atoms);  // close the geometric tail
    return spec;
}

std::vector<PreimagePair> paired_preimages(
    const std::vector<std::shared_ptr<const SystemStage>>& stages, std::size_t j, double x,
    double x_prime, int n, long N) {
    if (n < 1) throw ValidationError("paired_preimages needs n >= 1");
    if (j + n > stages.size()) throw ValidationError("window exceeds stage sequence");
    double xi = std::numeric_limits<double>::infinity();
    double gamma = std::numeric_limits<double>::infinity();
    int n0 = 1;
    for (int m = 0; m < n; ++m) {
        const SystemStage& st = *stages[j + m];
        xi = std::min(xi, st.xi());
        gamma = std::min(gamma, st.gamma());
        n0 = std::max(n0, st.n0());
    }
    double d = std::abs(x - x_prime);
    if (d >= xi) throw PairingError("points too far apart for branch pairing");

    std::vector<PreimagePair> cur = {{x, x_prime, d, 0.0}};
    for (int m = n - 1; m >= 0; --m) {
        const SystemStage& st = *stages[j + m];
        std::vector<PreimagePair> next;
        if (cur.size() * static_cast<std::size_t>(N) > 1'000'000)
            throw ValidationError("preimage pairing too large; reduce N or n");
        for (const PreimagePair& p : cur) {
            auto ba = st.branches(p.y, N);
            auto bb = st.branches(p.y_prime, N);
            for (std::size_t k = 0; k < ba.size(); ++k) {
                PreimagePair q;
                q.y = ba[k].y;
                q.y_prime = bb[k].y;
                q.distance = std::abs(q.y - q.y_prime);
                next.push_back(q);
            }
        }
        cur.swap(next);
    }
    double bound = std::pow(gamma, -static_cast<double>(n / n0)) * d;
    for (PreimagePair& p : cur) {
        p.bound = bound;
        if (p.distance > bound + 1e-12)
            throw PairingError("paired preimages violate the declared contraction bound");
    }
    return cur;
}

std::vector<double> trajectory(const std::vector<std::shared_ptr<const SystemStage>>& stages,
                               std::size_t j, double x0, int n) {
    if (n < 0) throw ValidationError("trajectory needs n >= 0");
    if (j + n > stages.size()) throw ValidationError("window exceeds stage sequence");
    std::vector<double> orbit = {x0};
    double x = x0;
    for (int m = 0; m < n; ++m) {
        try {
            x = stages[j + m]->forward(x);
        } catch (const DomainError& e) {
            throw OrbitError(std::string("orbit left the domain: ") + e.what(), m);
        }
        orbit.push_back(x);
    }
    return orbit;
}

}  // namespace rpfcone

#include "rpfcone/transfer.hpp"

#include <cmath>
#include <vector>

#include "rpfcone/cheb.hpp"
#include "rpfcone/errors.hpp"

namespace rpfcone {

StageOperator::StageOperator(TransferStage ts, const Potential& u, Complex z)
    : ts_(std::move(ts)), z_(z) {
    if (!ts_.stage) throw ValidationError("transfer stage needs a system stage");
    switch (ts_.stage->kind()) {
        case SystemStage::Kind::Gauss:
        case SystemStage::Kind::Interval:
            if (ts_.tower_weighted)
                throw ValidationError("level weighting needs a tower stage");
            build_interval(u);
            break;
        case SystemStage::Kind::FullShift:
            if (ts_.tower_weighted)
                throw ValidationError("level weighting needs a tower stage");
            build_shift(u);
            break;
        case SystemStage::Kind::Tower:
            build_tower(u);
            break;
    }
    if (tail_ > ts_.tail_budget)
        throw TruncationError("certified branch-sum tail exceeds the configured budget");
}

void StageOperator::build_interval(const Potential& u) {
    const Grid& g = *grid();
    const int n = static_cast<int>(g.size());
    dense_ = Eigen::MatrixXcd::Zero(n, n);
    const long N = ts_.truncation_N;
    const bool gauss = (ts_.stage->kind() == SystemStage::Kind::Gauss);

    std::vector<double> card(n);
    for (int i = 0; i < n; ++i) {
        const double x = g.xs[i];
        for (const Branch& b : ts_.stage->branches(x, N)) {
            Complex wt = std::exp(Complex(b.log_weight, 0.0) + z_ * u.eval(b.y));
            // Barycentric cardinal basis at the preimage.
            double S = 0.0;
            int hit = -1;
            for (int k = 0; k < n; ++k) {
                double dx = b.y - g.xs[k];
                if (dx == 0.0) { hit = k; break; }
                card[k] = g.bary_w[k] / dx;
                S += card[k];
            }
            if (hit >= 0) {
                dense_(i, hit) += wt;
            } else {
                for (int k = 0; k < n; ++k) dense_(i, k) += wt * (card[k] / S);
            }
        }
    }

    if (!gauss) {
        tail_ = 0.0;  // finitely many branches, all enumerated
        return;
    }

    // Tail of the countable branch sum: sum_{m>N} (x+m)^{-kappa} G(1/(x+m))
    // with kappa = 2 + c z for potential u = c ln x + regular part, and
    // G = e^{z u_reg} f. Second-order expansion of G at 0 turns the tail into
    // a rank-3 row correction with Hurwitz-zeta coefficients.
    const double c = u.log_coef();
    const Complex kappa = 2.0 + c * z_;
    if (kappa.real() <= 1.05) {
        tail_ = Grid::inf;  // the twisted branch sum barely (or not) converges
        return;
    }
    const auto jet = u.regular_jet(grid());
    const Complex g0 = std::exp(z_ * jet[0]);
    const Complex g1 = z_ * jet[1] * g0;
    const Complex g2 = (z_ * jet[2] + z_ * z_ * jet[1] * jet[1]) * g0;
    const auto rows = cheb::derivative_rows(n, 0.0, 3);
    for (int i = 0; i < n; ++i) {
        const double a = g.xs[i] + static_cast<double>(N) + 1.0;
        const Complex Z0 = cheb::hurwitz_zeta(kappa, a);
        const Complex Z1 = cheb::hurwitz_zeta(kappa + 1.0, a);
        const Complex Z2 = cheb::hurwitz_zeta(kappa + 2.0, a);
        for (int k = 0; k < n; ++k) {
            dense_(i, k) += Z0 * g0 * rows[0][k] + Z1 * (g0 * rows[1][k] + g1 * rows[0][k]) +
                            Z2 * (g2 * rows[0][k] + 2.0 * g1 * rows[1][k] + g0 * rows[2][k]) / 2.0;
        }
    }
    // Worst-case remainder of the expansion over unit-sup interpolants.
    double l1_row3 = 0.0;
    for (int k = 0; k < n; ++k) l1_row3 += std::abs(rows[3][k]);
    const double gb = std::abs(g0) + std::abs(g1) + 0.5 * std::abs(g2) + 1.0;
    tail_ = cheb::hurwitz_zeta(kappa.real() + 3.0, static_cast<double>(N) + 1.0).real() *
            l1_row3 / 6.0 * gb;
}

void StageOperator::build_shift(const Potential& u) {
    const auto gp = grid();
    const Grid& g = *gp;
    const int n = static_cast<int>(g.size());
    const int K = g.depth;
    const auto& weights = ts_.stage->symbol_weights();
    const int d = static_cast<int>(weights.size());
    const auto uvals = u.values_on(gp);
    dense_ = Eigen::MatrixXcd::Zero(n, n);
    std::vector<int> child(K);
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < d; ++s) {
            child[0] = s;
            for (int k = 1; k < K; ++k) child[k] = g.words[i][k - 1];
            long j = g.cell_index(0, child);
            if (j < 0) throw PairingError("shift preimage cell missing from grid");
            dense_(i, j) += weights[s] * std::exp(z_ * uvals[j]);
        }
    }
    tail_ = 0.0;
}

void StageOperator::build_tower(const Potential& u) {
    const auto* tower = dynamic_cast<const TowerStage*>(ts_.stage.get());
    if (!tower) throw ValidationError("tower operator needs a tower stage");
    const auto gp = grid();
    const Grid& g = *gp;
    const int n = static_cast<int>(g.size());
    const int K = g.depth;
    const auto& spec = tower->spec();
    const int J = static_cast<int>(spec.atom_masses.size());
    const auto uvals = u.values_on(gp);
    sparse_mode_ = true;
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 2);
    std::vector<int> child(K);
    for (int i = 0; i < n; ++i) {
        const int l = g.levels[i];
        if (l >= 1) {
            long p = g.cell_index(l - 1, g.words[i]);
            if (p < 0) throw PairingError("tower cell has no parent cell");
            Complex wt = std::exp(z_ * uvals[p]);
            if (ts_.tower_weighted) wt *= tower->level_weight(l - 1) / tower->level_weight(l);
            trips.emplace_back(i, static_cast<int>(p), wt);
            continue;
        }
        for (int a = 0; a < J; ++a) {
            child[0] = a;
            for (int k = 1; k < K; ++k) child[k] = g.words[i][k - 1];
            long q = g.cell_index(spec.return_times[a] - 1, child);
            if (q < 0) throw PairingError("tower return branch cell missing from grid");
            Complex wt = spec.atom_masses[a] * std::exp(z_ * uvals[q]);
            if (ts_.tower_weighted) wt *= tower->level_weight(spec.return_times[a] - 1);
            trips.emplace_back(i, static_cast<int>(q), wt);
        }
    }
    sparse_.resize(n, n);
    sparse_.setFromTriplets(trips.begin(), trips.end());
    tail_ = 0.0;
}

DiscreteFunction StageOperator::apply(const DiscreteFunction& f, ApplyReport* report) const {
    const auto gp = grid();
    if (f.values.size() != gp->size())
        throw ValidationError("function grid does not match operator grid");
    Eigen::Map<const Eigen::VectorXcd> v(f.values.data(), static_cast<long>(f.values.size()));
    Eigen::VectorXcd out = sparse_mode_ ? Eigen::VectorXcd(sparse_ * v)
                                        : Eigen::VectorXcd(dense_ * v);
    if (report) report->tail_bound += tail_ * sup_norm(f);
    return DiscreteFunction(gp, std::vector<Complex>(out.data(), out.data() + out.size()));
}

std::vector<Complex> StageOperator::apply_adjoint(const std::vector<Complex>& nu) const {
    if (nu.size() != grid()->size())
        throw ValidationError("dual vector length does not match operator grid");
    Eigen::Map<const Eigen::VectorXcd> v(nu.data(), static_cast<long>(nu.size()));
    // nu(L f) = (M^T nu)(f): plain transpose, no conjugation.
    Eigen::VectorXcd out = sparse_mode_ ? Eigen::VectorXcd(sparse_.transpose() * v)
                                        : Eigen::VectorXcd(dense_.transpose() * v);
    return std::vector<Complex>(out.data(), out.data() + out.size());
}

Eigen::MatrixXcd StageOperator::dense() const {
    if (sparse_mode_) return Eigen::MatrixXcd(sparse_);
    return dense_;
}

DiscreteFunction apply_L0(const TransferStage& ts, const DiscreteFunction& f,
                          ApplyReport* report) {
    StageOperator op(ts, Potential::zero(), 0.0);
    return op.apply(f, report);
}

DiscreteFunction apply_Lz(const TransferStage& ts, const Potential& u, Complex z,
                          const DiscreteFunction& f, ApplyReport* report) {
    StageOperator op(ts, u, z);
    return op.apply(f, report);
}

DiscreteFunction compose_window(const TwistWindow& w, const DiscreteFunction& f,
                                ApplyReport* report) {
    if (w.stages.size() != w.potentials.size())
        throw ValidationError("window needs one potential per stage");
    DiscreteFunction cur = f;
    for (std::size_t m = 0; m < w.stages.size(); ++m) {
        StageOperator op(w.stages[m], w.potentials[m], w.z);
        cur = op.apply(cur, report);
    }
    return cur;
}

double birkhoff_sum(const std::vector<std::shared_ptr<const SystemStage>>& stages,
                    const std::vector<Potential>& u, std::size_t j, int n, double x) {
    if (u.size() < stages.size()) throw ValidationError("need one potential per stage");
    auto orbit = trajectory(stages, j, x, n > 0 ? n - 1 : 0);
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += u[j + k].eval(orbit[k]);
    return s;
}

LYReport lasota_yorke_report(const TwistWindow& w, const DiscreteFunction& f) {
    const int n = static_cast<int>(w.stages.size());
    if (n == 0) throw ValidationError("window must be nonempty");
    double gamma = Grid::inf, xi = Grid::inf, Q = 0.0;
    int n0 = 1;
    std::vector<std::shared_ptr<const SystemStage>> stages;
    for (const TransferStage& ts : w.stages) {
        const SystemStage& st = *ts.stage;
        if (st.kind() == SystemStage::Kind::Tower)
            throw ValidationError("the Lasota-Yorke verifier covers covering-map stages");
        gamma = std::min(gamma, st.gamma());
        xi = std::min(xi, st.xi());
        Q = std::max(Q, st.holder_Q());
        n0 = std::max(n0, st.n0());
        stages.push_back(ts.stage);
    }

    LYReport rep;
    rep.Q = Q;
    const auto gp = w.stages.front().stage->grid();

    TwistWindow w0 = w;
    w0.z = 0.0;
    rep.sup_L0_one = sup_norm(compose_window(w0, DiscreteFunction::constant(gp, 1.0)));

    if (gp->kind == GridKind::IntervalCollocation) {
        for (double x : gp->xs)
            rep.sup_birkhoff =
                std::max(rep.sup_birkhoff, std::abs(birkhoff_sum(stages, w.potentials, 0, n, x)));
    } else {
        // Locally constant potentials on symbolic grids: bound the sum by the
        // per-stage sups.
        for (std::size_t m = 0; m < w.potentials.size(); ++m)
            rep.sup_birkhoff += w.potentials[m].sup_on(gp);
    }

    rep.lhs = norm_alpha(compose_window(w, f), w.alpha, xi).total;
    double vf = norm_alpha(f, w.alpha, xi).seminorm;
    double z1 = std::abs(w.z.real()) + std::abs(w.z.imag());
    rep.rhs = rep.sup_L0_one * std::exp(std::abs(w.z.real()) * rep.sup_birkhoff) *
              (vf * std::pow(gamma, -w.alpha * static_cast<double>(n / n0)) +
               (1.0 + 2.0 * Q) * (1.0 + z1) * sup_norm(f));
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-12;
    return rep;
}

}  // namespace rpfcone

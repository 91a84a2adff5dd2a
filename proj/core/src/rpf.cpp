#include "rpfcone/rpf.hpp"

#include <cmath>

#include "rpfcone/errors.hpp"

namespace rpfcone {

namespace {

const std::vector<double>& ref_weights(const Grid& g) {
    switch (g.kind) {
        case GridKind::IntervalCollocation: return g.quad_w;
        case GridKind::CylinderPartition: return g.masses;
        case GridKind::TowerLevels: return g.masses_m;
    }
    throw DomainError("unknown grid kind");
}

Complex ref_apply(const DiscreteFunction& f) {
    const auto& w = ref_weights(*f.grid);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * f.values[i];
    return acc;
}

Complex dot(const std::vector<Complex>& nu, const std::vector<Complex>& v) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) acc += nu[i] * v[i];
    return acc;
}

void scale(std::vector<Complex>& v, Complex c) {
    for (Complex& x : v) x *= c;
}

// 1/v on tower grids, the constant 1 otherwise: the reference direction the
// dual family is normalized against.
DiscreteFunction reference_h(const std::shared_ptr<const Grid>& gp, bool tower_mode) {
    if (!tower_mode) return DiscreteFunction::constant(gp, 1.0);
    std::vector<Complex> vals(gp->size());
    for (std::size_t i = 0; i < gp->size(); ++i)
        vals[i] = gp->masses[i] / gp->masses_m[i];  // m0/m = 1/v per cell
    return DiscreteFunction(gp, std::move(vals));
}

}  // namespace

Complex RPFTriplet::lambda_product() const {
    Complex p = 1.0;
    for (Complex l : lambda) p *= l;
    return p;
}

RPFTriplet solve_rpf(const TwistWindow& w, const RPFConfig& cfg) {
    const std::size_t P = w.stages.size();
    if (P == 0) throw ValidationError("empty window");
    if (w.potentials.size() != P) throw ValidationError("window needs one potential per stage");

    std::vector<StageOperator> ops;
    ops.reserve(P);
    bool tower_mode = false;
    for (std::size_t m = 0; m < P; ++m) {
        ops.emplace_back(w.stages[m], w.potentials[m], w.z);
        if (w.stages[m].tower_weighted) tower_mode = true;
    }

    RPFTriplet out;
    out.normalization = tower_mode ? NormalizationMode::Tower : NormalizationMode::Covering;

    const int warmup =
        (cfg.boundary == BoundaryMode::Truncated)
            ? static_cast<int>(std::ceil(std::log(cfg.tol) / std::log(0.5)))
            : 0;

    // Forward pass.
    DiscreteFunction f = DiscreteFunction::constant(ops.front().grid(), 1.0);
    {
        Complex c = ref_apply(f);
        for (Complex& v : f.values) v /= c;
    }
    bool converged = false;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        DiscreteFunction prev = f;
        for (std::size_t m = 0; m < P; ++m) {
            f = ops[m].apply(f);
            Complex c = ref_apply(f);
            if (std::abs(c) < cfg.lambda_floor * sup_norm(f))
                throw DegeneracyError("reference functional nearly vanishes on the iterate");
            for (Complex& v : f.values) v /= c;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            diff = std::max(diff, std::abs(f.values[i] - prev.values[i]));
        out.trace.push_back(diff);
        if (diff < cfg.tol * std::max(1.0, sup_norm(f)) &&
            (cfg.boundary == BoundaryMode::Periodic || iter + 1 >= warmup)) {
            converged = true;
            break;
        }
        if (cfg.boundary == BoundaryMode::Truncated && iter + 1 >= std::max(warmup, 60)) {
            converged = true;  // fixed burn-in window read-off
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("forward pass did not converge", out.trace);

    out.h.resize(P);
    out.h[0] = f;
    for (std::size_t m = 0; m + 1 < P; ++m) {
        DiscreteFunction next = ops[m].apply(out.h[m]);
        Complex c = ref_apply(next);
        for (Complex& v : next.values) v /= c;
        out.h[m + 1] = std::move(next);
    }

    // Backward pass.
    std::vector<Complex> nu(ops.front().grid()->size());
    {
        const auto& rw = ref_weights(*ops.front().grid());
        for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = rw[i];
    }
    converged = false;
    std::vector<double> back_trace;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        std::vector<Complex> prev = nu;
        for (std::size_t m = P; m-- > 0;) {
            nu = ops[m].apply_adjoint(nu);
            Complex c = 0.0;
            for (const Complex& v : nu) c += v;
            if (std::abs(c) == 0.0)
                throw DegeneracyError("dual iterate lost its mass");
            for (Complex& v : nu) v /= c;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < nu.size(); ++i)
            diff = std::max(diff, std::abs(nu[i] - prev[i]));
        back_trace.push_back(diff);
        if (diff < cfg.tol &&
            (cfg.boundary == BoundaryMode::Periodic || iter + 1 >= warmup)) {
            converged = true;
            break;
        }
        if (cfg.boundary == BoundaryMode::Truncated && iter + 1 >= std::max(warmup, 60)) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("backward pass did not converge", back_trace);

    out.nu.resize(P);
    out.nu[0] = nu;
    for (std::size_t m = P; m-- > 1;) {
        const std::vector<Complex>& upstream = (m + 1 == P) ? out.nu[0] : out.nu[m + 1];
        std::vector<Complex> cur = ops[m].apply_adjoint(upstream);
        Complex c = 0.0;
        for (const Complex& v : cur) c += v;
        for (Complex& v : cur) v /= c;
        out.nu[m] = std::move(cur);
    }

    // Normalization: nu_j against the reference direction, then h_j against
    // nu_j, then lambda from the eigen-equation.
    for (std::size_t m = 0; m < P; ++m) {
        DiscreteFunction href = reference_h(ops[m].grid(), tower_mode);
        Complex c = dot(out.nu[m], href.values);
        if (std::abs(c) < cfg.lambda_floor)
            throw DegeneracyError("dual functional nearly vanishes on the reference direction");
        scale(out.nu[m], 1.0 / c);
        Complex ch = dot(out.nu[m], out.h[m].values);
        if (std::abs(ch) < cfg.lambda_floor)
            throw DegeneracyError("dual functional nearly vanishes on the eigenfunction");
        for (Complex& v : out.h[m].values) v /= ch;
    }
    out.lambda.resize(P);
    for (std::size_t m = 0; m < P; ++m) {
        DiscreteFunction img = ops[m].apply(out.h[m]);
        out.lambda[m] = dot(out.nu[(m + 1) % P], img.values);
        if (std::abs(out.lambda[m]) < cfg.lambda_floor)
            throw DegeneracyError("leading eigenvalue collapsed toward zero");
    }
    return out;
}

std::vector<ResidualRow> rpf_residuals(const RPFTriplet& t, const TwistWindow& w) {
    const std::size_t P = w.stages.size();
    if (t.h.size() != P || t.nu.size() != P)
        throw ValidationError("triplet and window are not aligned");
    std::vector<ResidualRow> rows(P);
    for (std::size_t m = 0; m < P; ++m) {
        StageOperator op(w.stages[m], w.potentials[m], w.z);
        const DiscreteFunction& hn = t.h[(m + 1) % P];
        DiscreteFunction img = op.apply(t.h[m]);
        double r1 = 0.0;
        for (std::size_t i = 0; i < img.values.size(); ++i)
            r1 = std::max(r1, std::abs(img.values[i] - t.lambda[m] * hn.values[i]));
        rows[m].eigen_eq = r1;

        // sup over g of |nu_{m+1}(L g) - lambda nu_m(g)| / ||g||_inf is the
        // l1 norm of the coefficient difference.
        std::vector<Complex> dual = op.apply_adjoint(t.nu[(m + 1) % P]);
        double r2 = 0.0;
        for (std::size_t i = 0; i < dual.size(); ++i)
            r2 += std::abs(dual[i] - t.lambda[m] * t.nu[m][i]);
        rows[m].dual_eq = r2;

        DiscreteFunction href = reference_h(op.grid(), t.normalization == NormalizationMode::Tower);
        rows[m].norm_dev = std::max(std::abs(dot(t.nu[m], href.values) - 1.0),
                                    std::abs(dot(t.nu[m], t.h[m].values) - 1.0));
    }
    return rows;
}

ConvergenceReport convergence_rate(const TwistWindow& w, const DiscreteFunction& g,
                                   const RPFTriplet& t, int n_max) {
    const std::size_t P = w.stages.size();
    std::vector<StageOperator> ops;
    for (std::size_t m = 0; m < P; ++m)
        ops.emplace_back(w.stages[m], w.potentials[m], w.z);
    ConvergenceReport rep;
    Complex nu_g = dot(t.nu[0], g.values);
    DiscreteFunction cur = g;
    Complex lam = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        cur = ops[(n - 1) % P].apply(cur);
        lam *= t.lambda[(n - 1) % P];
        const DiscreteFunction& hn = t.h[n % P];
        double r = 0.0;
        for (std::size_t i = 0; i < cur.values.size(); ++i)
            r = std::max(r, std::abs(cur.values[i] / lam - nu_g * hn.values[i]));
        rep.residuals.push_back(r);
    }
    double peak = 0.0;
    for (double r : rep.residuals) peak = std::max(peak, r);
    double floor_ = std::max(1e-14 * std::max(peak, sup_norm(g)), 1e-300);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int k = 0;
    for (int n = 1; n <= n_max; ++n) {
        double r = rep.residuals[n - 1];
        if (r <= floor_) {
            rep.noise_floor_truncated = true;
            continue;
        }
        double x = n, y = std::log(r);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        ++k;
    }
    rep.fitted_points = k;
    if (k >= 2) {
        double denom = k * sxx - sx * sx;
        double slope = (k * sxy - sx * sy) / denom;
        double icept = (sy - slope * sx) / k;
        rep.rate = std::exp(slope);
        rep.prefactor = std::exp(icept);
        double ss_tot = syy - sy * sy / k;
        double ss_res = 0.0;
        int idx = 0;
        for (int n = 1; n <= n_max; ++n) {
            double r = rep.residuals[n - 1];
            if (r <= floor_) continue;
            double e = std::log(r) - (icept + slope * n);
            ss_res += e * e;
            ++idx;
        }
        rep.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return rep;
}

}  // namespace rpfcone

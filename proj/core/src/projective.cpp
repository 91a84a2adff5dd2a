#include "rpfcone/projective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rpfcone/errors.hpp"

namespace rpfcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double value_scale(const std::vector<Complex>& vals) {
    double s = 0.0;
    for (const Complex& v : vals) s = std::max(s, std::abs(v));
    return s;
}

bool is_zero_function(const DiscreteFunction& f) {
    for (const Complex& v : f.values)
        if (std::abs(v) > 0.0) return false;
    return true;
}

}  // namespace

bool real_cone_contains(const FunctionalFamily& S, const DiscreteFunction& f) {
    if (!f.is_real()) throw ValidationError("real cone test needs a real-valued function");
    auto vals = S.evaluate_all(f);
    double thr = kConeTol * std::max(1.0, value_scale(vals));
    for (const Complex& v : vals)
        if (v.real() < -thr) return false;
    return true;
}

double beta_gauge(const FunctionalFamily& S, const DiscreteFunction& f,
                  const DiscreteFunction& g) {
    if (!real_cone_contains(S, f) || !real_cone_contains(S, g))
        throw PreconditionError("beta gauge arguments must lie in the cone");
    if (is_zero_function(f)) throw DegeneracyError("beta gauge: first argument is zero");
    auto vf = S.evaluate_all(f);
    auto vg = S.evaluate_all(g);
    double tf = kConeTol * std::max(1.0, value_scale(vf));
    double tg = kConeTol * std::max(1.0, value_scale(vg));
    double best = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < vf.size(); ++k) {
        double sf = vf[k].real(), sg = vg[k].real();
        if (sf > tf) {
            best = std::max(best, sg / sf);
            any = true;
        } else if (sg > tg) {
            return kInf;
        }
    }
    if (!any) return kInf;
    return std::max(best, 0.0);
}

double hilbert_distance(const FunctionalFamily& S, const DiscreteFunction& f,
                        const DiscreteFunction& g) {
    double bf = beta_gauge(S, f, g);
    double bg = beta_gauge(S, g, f);
    if (!std::isfinite(bf) || !std::isfinite(bg)) return kInf;
    double p = bf * bg;
    if (p <= 0.0) return kInf;  // degenerate boundary pair
    return std::max(0.0, std::log(p));
}

double birkhoff_contraction_bound(double D) {
    if (D < 0.0) throw PreconditionError("diameter must be nonnegative");
    if (!std::isfinite(D)) return 1.0;
    return std::tanh(D / 4.0);
}

bool complex_cone_contains(const FunctionalFamily& S, const DiscreteFunction& f) {
    auto vals = S.evaluate_all(f);
    double thr = kConeTol * std::max(1.0, value_scale(vals));
    std::vector<double> angles;
    angles.reserve(vals.size());
    for (const Complex& v : vals)
        if (std::abs(v) > thr) angles.push_back(std::arg(v));
    if (angles.size() <= 1) return true;
    std::sort(angles.begin(), angles.end());
    // All pairwise angles <= pi/2 iff the values fit in a closed quarter
    // sector iff the largest circular gap is >= 3*pi/2.
    double max_gap = 2.0 * std::numbers::pi - (angles.back() - angles.front());
    for (std::size_t k = 1; k < angles.size(); ++k)
        max_gap = std::max(max_gap, angles[k] - angles[k - 1]);
    return max_gap >= 1.5 * std::numbers::pi - 1e-9;
}

ExclusionBounds exclusion_set_bounds(const FunctionalFamily& S, const DiscreteFunction& x,
                                     const DiscreteFunction& y, bool keep_witnesses) {
    if (is_zero_function(x) || is_zero_function(y))
        throw DegeneracyError("exclusion bounds need nonzero arguments");
    if (!complex_cone_contains(S, x) || !complex_cone_contains(S, y))
        throw PreconditionError("exclusion bounds: arguments must lie in the complex cone");

    ExclusionBounds out;

    // Collinearity: y ~ c x for a complex scalar c.
    {
        Complex num = 0.0;
        double den = 0.0, nx = 0.0, ny = 0.0;
        for (std::size_t i = 0; i < x.values.size(); ++i) {
            num += std::conj(x.values[i]) * y.values[i];
            den += std::norm(x.values[i]);
            nx = std::max(nx, std::abs(x.values[i]));
            ny = std::max(ny, std::abs(y.values[i]));
        }
        Complex c = num / den;
        double resid = 0.0;
        for (std::size_t i = 0; i < x.values.size(); ++i)
            resid = std::max(resid, std::abs(y.values[i] - c * x.values[i]));
        if (resid <= 1e-12 * std::max(ny, std::abs(c) * nx)) {
            out.collinear = true;
            out.a = out.b = 0.0;
            return out;
        }
    }

    auto vx = S.evaluate_all(x);
    auto vy = S.evaluate_all(y);
    const std::size_t n = vx.size();
    double a = kInf, b = 0.0;
    bool any = false;
    constexpr std::size_t kWitnessCap = 64;

    auto record = [&](std::size_t i, std::size_t j, RegionKind kind, double lo_m, double hi_m) {
        any = true;
        a = std::min(a, lo_m);
        b = std::max(b, hi_m);
        if (keep_witnesses && out.witnesses.size() < kWitnessCap)
            out.witnesses.push_back({i, j, kind, lo_m, hi_m});
    };

    // The pair quadratic is symmetric under swapping mu and nu, so unordered
    // pairs suffice.
    for (std::size_t i = 0; i < n; ++i) {
        const Complex A = vx[i], B = vy[i];
        for (std::size_t j = i; j < n; ++j) {
            const Complex Cv = vx[j], Dv = vy[j];
            // Re(conj(zA-B)(zCv-Dv)) = alpha|z|^2 + Re(beta z) + c
            double alpha = (std::conj(A) * Cv).real();
            Complex beta = -(A * std::conj(Dv) + std::conj(B) * Cv);
            double c = (std::conj(B) * Dv).real();
            double scale = std::abs(A) * std::abs(Cv) + std::abs(A) * std::abs(Dv) +
                           std::abs(B) * std::abs(Cv) + std::abs(B) * std::abs(Dv);
            double eps = 1e-14 * scale;
            if (std::abs(alpha) <= eps) {
                if (std::abs(beta) <= eps) {
                    if (c < -eps) record(i, j, RegionKind::Plane, 0.0, kInf);
                    continue;
                }
                double lo_m = std::max(c, 0.0) / std::abs(beta);
                record(i, j, RegionKind::HalfPlane, lo_m, kInf);
                continue;
            }
            Complex zc = -std::conj(beta) / (2.0 * alpha);
            double r2 = std::norm(beta) / (4.0 * alpha * alpha) - c / alpha;
            // The subtraction above cancels completely for tangent regions
            // (e.g. the double root |z*A - B|^2 = 0 when the pair repeats an
            // index), leaving round-off of order eps * |zc|^2 whose square
            // root would smear a point into a radius-1e-8 disc. Snap such
            // radicands to zero.
            double r2_ref =
                std::norm(beta) / (4.0 * alpha * alpha) + std::abs(c / alpha);
            if (std::abs(r2) <= 1e-13 * r2_ref) r2 = 0.0;
            if (alpha > 0.0) {
                if (r2 < 0.0) continue;  // empty
                double r = std::sqrt(r2);
                record(i, j, RegionKind::Disc, std::max(std::abs(zc) - r, 0.0),
                       std::abs(zc) + r);
            } else {
                if (r2 <= 0.0) {
                    record(i, j, RegionKind::Plane, 0.0, kInf);
                    continue;
                }
                double r = std::sqrt(r2);
                record(i, j, RegionKind::DiscComplement, std::max(r - std::abs(zc), 0.0),
                       kInf);
            }
        }
    }

    if (!any) {
        out.empty_union = true;
        out.a = kInf;
        out.b = 0.0;
        return out;
    }
    out.a = a;
    out.b = b;
    return out;
}

double delta_distance(const FunctionalFamily& S, const DiscreteFunction& x,
                      const DiscreteFunction& y) {
    ExclusionBounds eb = exclusion_set_bounds(S, x, y, false);
    if (eb.collinear || eb.empty_union) return 0.0;
    if (!(eb.a > 0.0) || !std::isfinite(eb.b)) return kInf;
    return std::max(0.0, std::log(eb.b / eb.a));
}

ApertureReport aperture_constant(const FunctionalFamily& S, const LinearFunctional& mu,
                                 const std::vector<DiscreteFunction>& sample) {
    if (sample.empty()) throw ValidationError("aperture needs a nonempty sample");
    ApertureReport rep;
    rep.mu_norm = mu.dual_norm(*S.grid);
    for (const DiscreteFunction& f : sample) {
        if (!real_cone_contains(S, f))
            throw PreconditionError("aperture sample member outside the cone");
        double nf = sup_norm(f);
        if (nf == 0.0) continue;
        double m = apply(mu, f).real();
        if (m <= kConeTol * nf * rep.mu_norm)
            throw ApertureViolation("mu vanishes on a nonzero cone element");
        rep.K = std::max(rep.K, nf * rep.mu_norm / m);
    }
    rep.complexified = 2.0 * std::sqrt(2.0) * rep.K;
    return rep;
}

}  // namespace rpfcone

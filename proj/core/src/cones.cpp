#include "rpfcone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rpfcone/errors.hpp"

namespace rpfcone {

DiscreteFunction tower_reference_h(const std::shared_ptr<const TowerStage>& tower) {
    auto gp = tower->grid();
    std::vector<Complex> v(gp->size());
    for (std::size_t i = 0; i < gp->size(); ++i)
        v[i] = 1.0 / tower->level_weight(gp->levels[i]);
    return DiscreteFunction(gp, std::move(v));
}

TowerConeFamily tower_functional_family(TowerConeParams params,
                                        const std::shared_ptr<const TowerStage>& tower) {
    auto gp = tower->grid();
    const Grid& g = *gp;
    const std::size_t n = g.size();
    if (!(params.eps0 > 0.0)) throw ValidationError("eps0 must be positive");

    int max_level = 0;
    for (std::size_t i = 0; i < n; ++i) max_level = std::max(max_level, g.levels[i]);

    // Exceptional set: the highest levels, keeping m(P2) < eps0.
    std::vector<double> level_mass(max_level + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) level_mass[g.levels[i]] += g.masses_m[i];
    int cutoff = max_level + 1;
    double tail = 0.0;
    while (cutoff > 1 && tail + level_mass[cutoff - 1] < params.eps0) {
        tail += level_mass[cutoff - 1];
        --cutoff;
    }
    params.level_cutoff = cutoff;

    TowerConeFamily out{FunctionalFamily{}, params, tower_reference_h(tower), {}, {}};
    for (std::size_t i = 0; i < n; ++i)
        (g.levels[i] < cutoff ? out.p1_nodes : out.p2_nodes).push_back(i);
    if (out.p1_nodes.empty()) throw ValidationError("empty tower partition");

    double D = 0.0;
    for (std::size_t i : out.p1_nodes) D = std::max(D, g.masses_m[i] / g.masses[i]);
    params.D = D;
    params.gamma_s = std::pow(g.metric_base, g.k_depth);
    const double sup_h = sup_norm(out.h);
    const double lip_h = norm_tower(out.h).seminorm;
    if (params.a <= 0.0) params.a = 10.0 * std::max(1.0, D);
    if (params.b <= 0.0) params.b = 10.0 * std::max(1.0, lip_h);
    if (params.c <= 0.0) params.c = 10.0 * std::max(1.0, sup_h);
    if (!(params.a > std::max(D, 1.0)) || !(params.b > lip_h) ||
        !(params.c > std::max(sup_h, 1.0)))
        throw ValidationError("tower cone parameters too small for 1 and h to be members");
    params.c1 = params.a * sup_h + params.b * params.gamma_s;
    params.c2 = std::max(params.c, params.c1);
    out.params = params;

    std::vector<LinearFunctional> fs;
    // Averaging functionals per partition cell (each cell is one grid node).
    for (std::size_t i : out.p1_nodes) {
        double v = g.masses_m[i] / g.masses[i];
        LinearFunctional up;
        up.label = "avg";
        up.point_terms.emplace_back(i, v);
        fs.push_back(up);
        LinearFunctional gp_;
        gp_.label = "a-avg";
        gp_.quad_coeff = params.a;
        gp_.point_terms.emplace_back(i, -v);
        fs.push_back(std::move(gp_));
    }
    // Lipschitz pair functionals over all same-floor node pairs.
    std::vector<std::vector<std::size_t>> by_level(max_level + 1);
    for (std::size_t i = 0; i < n; ++i) by_level[g.levels[i]].push_back(i);
    for (const auto& nodes : by_level) {
        for (std::size_t p = 0; p < nodes.size(); ++p)
            for (std::size_t q = p + 1; q < nodes.size(); ++q) {
                double d = g.distance(nodes[p], nodes[q]);
                if (!(d > 0.0)) continue;
                LinearFunctional f1;
                f1.quad_coeff = params.b;
                f1.point_terms.emplace_back(nodes[p], -1.0 / d);
                f1.point_terms.emplace_back(nodes[q], 1.0 / d);
                fs.push_back(f1);
                std::swap(f1.point_terms[0], f1.point_terms[1]);
                f1.point_terms[0].second = -1.0 / d;
                f1.point_terms[1].second = 1.0 / d;
                fs.push_back(std::move(f1));
            }
    }
    // Pointwise functionals on the exceptional set.
    for (std::size_t i : out.p2_nodes) {
        LinearFunctional plus;
        plus.quad_coeff = params.c;
        plus.point_terms.emplace_back(i, 1.0);
        fs.push_back(plus);
        LinearFunctional minus;
        minus.quad_coeff = params.c;
        minus.point_terms.emplace_back(i, -1.0);
        fs.push_back(std::move(minus));
    }
    out.family = FunctionalFamily(gp, std::move(fs));
    return out;
}

DiscreteFunction sample_tower_cone_element(const TowerConeFamily& cone, std::mt19937_64& rng,
                                           double amplitude) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = cone.h.values.size();
    std::vector<double> noise(n);
    for (double& v : noise) v = u(rng);
    double amp = amplitude;
    for (int attempt = 0; attempt < 40; ++attempt, amp *= 0.5) {
        std::vector<Complex> vals(n);
        for (std::size_t i = 0; i < n; ++i)
            vals[i] = cone.h.values[i] * (1.0 + amp * noise[i]);
        DiscreteFunction f(cone.h.grid, std::move(vals));
        if (real_cone_contains(cone.family, f)) return f;
    }
    return cone.h;
}

double LogHolderConeParams::d0(double gamma) const {
    double sp = s_prime(gamma);
    if (!(sp < s)) throw ValidationError("cone parameter s too small: no improvement");
    return 2.0 * std::log((s + sp) / (s - sp) * std::exp(s * Q));
}

FunctionalFamily logholder_family(const LogHolderConeParams& params,
                                  const std::shared_ptr<const Grid>& grid) {
    const Grid& g = *grid;
    const std::size_t n = g.size();
    std::vector<LinearFunctional> fs;
    for (std::size_t i = 0; i < n; ++i) fs.push_back(LinearFunctional::point_eval(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = g.distance(i, j);
            if (!(d > 0.0) || !(d < params.xi)) continue;
            LinearFunctional s;  // e^{sQ d^alpha} f(x') - f(x) >= 0
            s.point_terms.emplace_back(j, std::exp(params.s * params.Q *
                                                   std::pow(d, params.alpha)));
            s.point_terms.emplace_back(i, -1.0);
            fs.push_back(std::move(s));
        }
    return FunctionalFamily(grid, std::move(fs));
}

LogHolderMembership logholder_membership(const LogHolderConeParams& params,
                                         const DiscreteFunction& f) {
    if (!f.is_real()) throw ValidationError("log-Holder membership needs a real function");
    LogHolderMembership out{true, logholder_family(params, f.grid)};
    auto vals = out.family.evaluate_all(f);
    double scale = 1.0;
    for (const Complex& v : vals) scale = std::max(scale, std::abs(v));
    for (const Complex& v : vals)
        if (v.real() < -kConeTol * scale) {
            out.member = false;
            break;
        }
    return out;
}

DiscreteFunction sample_logholder_element(const LogHolderConeParams& params,
                                          const std::shared_ptr<const Grid>& grid,
                                          std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = grid->size();
    std::vector<Complex> vals(n);
    if (grid->kind == GridKind::IntervalCollocation) {
        // log f = slowly varying trig sum with Lipschitz constant < s Q.
        double budget = 0.8 * params.s * params.Q;
        double a1 = u(rng), a2 = u(rng), ph1 = u(rng) * 3.14, ph2 = u(rng) * 3.14;
        double norm = 2.0 * 3.141592653589793 * (std::abs(a1) + 2.0 * std::abs(a2)) + 1e-12;
        double scale = budget / norm;
        for (std::size_t i = 0; i < n; ++i) {
            double x = grid->xs[i];
            double w = scale * (a1 * std::sin(2 * 3.141592653589793 * x + ph1) +
                                a2 * std::sin(4 * 3.141592653589793 * x + ph2));
            vals[i] = std::exp(w);
        }
    } else {
        // Hierarchical increments: prefix depth k contributes at most
        // 0.4 (1 - base^alpha) s Q base^{k alpha}, so pairs separated at s0
        // differ in log by at most 0.8 s Q base^{s0 alpha} <= s Q d^alpha.
        double base = std::pow(grid->metric_base, params.alpha);
        double cap = 0.4 * (1.0 - base) * params.s * params.Q;
        std::vector<double> w(n, 0.0);
        for (int k = 0; k < grid->depth; ++k) {
            std::map<long, double> prefix_bump;
            double level_cap = cap * std::pow(base, k);
            for (std::size_t i = 0; i < n; ++i) {
                long key = 0;
                for (int t = 0; t <= k; ++t) key = key * grid->n_symbols + grid->words[i][t];
                auto it = prefix_bump.find(key);
                if (it == prefix_bump.end())
                    it = prefix_bump.emplace(key, level_cap * u(rng)).first;
                w[i] += it->second;
            }
        }
        for (std::size_t i = 0; i < n; ++i) vals[i] = std::exp(w[i]);
    }
    return DiscreteFunction(grid, std::move(vals));
}

InvarianceReport invariance_check(const FunctionalFamily& cone_out, const TwistWindow& window,
                                  const std::vector<DiscreteFunction>& sample,
                                  std::size_t max_pairs) {
    if (window.z != Complex(0.0))
        throw ValidationError("invariance check runs the untwisted window");
    InvarianceReport rep;
    std::vector<DiscreteFunction> images;
    images.reserve(sample.size());
    for (const DiscreteFunction& f : sample) {
        DiscreteFunction img = compose_window(window, f);
        auto vals = cone_out.evaluate_all(img);
        double scale = 1.0, worst = Grid::inf;
        for (const Complex& v : vals) scale = std::max(scale, std::abs(v));
        for (const Complex& v : vals) worst = std::min(worst, v.real() / scale);
        rep.worst_margin = std::min(rep.worst_margin, worst);
        if (worst < -kConeTol) {
            rep.all_inside = false;
            ++rep.failures;
        }
        images.push_back(std::move(img));
    }
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < images.size() && pairs < max_pairs; ++i)
        for (std::size_t j = i + 1; j < images.size() && pairs < max_pairs; ++j, ++pairs)
            rep.image_diameter =
                std::max(rep.image_diameter, hilbert_distance(cone_out, images[i], images[j]));
    return rep;
}

DominationReport domination_epsilon(const FunctionalFamily& S, const TwistWindow& window_z,
                                    const std::vector<DiscreteFunction>& sample, double d0,
                                    double s_cone) {
    DominationReport rep;
    TwistWindow w0 = window_z;
    w0.z = 0.0;
    for (const DiscreteFunction& f : sample) {
        auto vz = S.evaluate_all(compose_window(window_z, f));
        auto v0 = S.evaluate_all(compose_window(w0, f));
        double scale = 0.0;
        for (const Complex& v : v0) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < v0.size(); ++k) {
            double denom = v0[k].real();
            if (denom <= kConeTol * scale) {
                if (std::abs(vz[k] - v0[k]) <= kConeTol * scale) continue;
                throw ApertureViolation("untwisted functional vanishes on a cone element");
            }
            rep.epsilon = std::max(rep.epsilon, std::abs(vz[k] - v0[k]) / denom);
        }
    }
    rep.delta_eps = 2.0 * rep.epsilon * (1.0 + std::cosh(0.5 * d0));
    rep.contraction_ok = rep.delta_eps < 1.0;
    if (s_cone > 1.0) {
        double sup_S = 0.0;
        const auto gp = window_z.stages.front().stage->grid();
        std::vector<std::shared_ptr<const SystemStage>> stages;
        for (const auto& ts : window_z.stages) stages.push_back(ts.stage);
        if (gp->kind == GridKind::IntervalCollocation) {
            for (double x : gp->xs)
                sup_S = std::max(sup_S,
                                 std::abs(birkhoff_sum(stages, window_z.potentials, 0,
                                                       static_cast<int>(stages.size()), x)));
        } else {
            for (const auto& u : window_z.potentials) sup_S += u.sup_on(gp);
        }
        rep.analytic_bound =
            std::abs(window_z.z) * (2.0 * sup_S + 3.0 / (s_cone - 1.0));
    }
    return rep;
}

PerturbationRadius perturbation_radius(double C0, double d0) {
    if (!(C0 > 0.0) || d0 < 0.0)
        throw ValidationError("perturbation radius needs C0 > 0 and d0 >= 0");
    PerturbationRadius out;
    const double margin = 0.5;
    out.delta_r = 1.0 - margin;
    out.r = (1.0 - margin) / (2.0 * C0 * (1.0 + std::cosh(0.5 * d0)));
    out.d1 = d0 + 6.0 * std::abs(std::log(1.0 - out.delta_r));
    return out;
}

namespace {

double shift_real(const TowerConeFamily& cone, const DiscreteFunction& f) {
    const TowerConeParams& p = cone.params;
    const Grid& g = *cone.h.grid;
    if (!(p.a > 1.0) || !(p.b > norm_tower(cone.h).seminorm) ||
        !(p.c > sup_norm(cone.h)))
        throw ValidationError("reproducing shift needs positive denominators");
    if (real_cone_contains(cone.family, f)) return 0.0;
    double I = integral(f).real();
    double b1 = 0.0, b3 = 0.0;
    for (std::size_t i : cone.p1_nodes) {
        double avg = (g.masses_m[i] / g.masses[i]) * f.values[i].real();
        b1 = std::max(b1, (avg - p.a * I) / (p.a - 1.0));
        b3 = std::max(b3, -avg);
    }
    double b2 = (norm_tower(f).seminorm - p.b * I) / (p.b - norm_tower(cone.h).seminorm);
    double b4 = (sup_norm(f) - p.c * I) / (p.c - sup_norm(cone.h));
    return std::max({0.0, b1, b2, b3, b4}) * (1.0 + 1e-9) + 1e-12;
}

}  // namespace

Complex reproducing_shift(const TowerConeFamily& cone, const DiscreteFunction& f) {
    const std::size_t n = f.values.size();
    std::vector<Complex> re(n), im(n);
    bool has_im = false;
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = f.values[i].real();
        im[i] = f.values[i].imag();
        if (f.values[i].imag() != 0.0) has_im = true;
    }
    DiscreteFunction f1(f.grid, std::move(re));
    Complex R = shift_real(cone, f1);
    if (has_im) R += Complex(0.0, 1.0) * shift_real(cone, DiscreteFunction(f.grid, std::move(im)));

    // Verify, enlarging if the componentwise recipe is not quite enough for
    // the complexified cone; f/t + h tends to the interior as t grows.
    double bump = std::max(1.0, sup_norm(f));
    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<Complex> vals(n);
        for (std::size_t i = 0; i < n; ++i) vals[i] = f.values[i] + R * cone.h.values[i];
        DiscreteFunction shifted(f.grid, std::move(vals));
        if (complex_cone_contains(cone.family, shifted)) return R;
        R = (std::abs(R) > 0.0) ? R * 2.0 : Complex(bump);
    }
    throw ConvergenceError("reproducing shift failed to reach the complex cone", {});
}

}  // namespace rpfcone

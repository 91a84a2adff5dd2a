#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rpfcone/cheb.hpp"
#include "rpfcone/errors.hpp"
#include "rpfcone/transfer.hpp"

using namespace rpfcone;

namespace {

DiscreteFunction gauss_density(const std::shared_ptr<const Grid>& g) {
    std::vector<Complex> hv(g->size());
    for (std::size_t i = 0; i < g->size(); ++i)
        hv[i] = 1.0 / (std::log(2.0) * (1.0 + g->xs[i]));
    return DiscreteFunction(g, hv);
}

}  // namespace

TEST_CASE("Gauss operator fixes the classical invariant density") {
    TransferStage ts{gauss_stage(64), false, 10000, 1e-3};
    auto g = ts.stage->grid();
    auto h = gauss_density(g);
    auto Lh = apply_L0(ts, h);
    for (std::size_t i = 0; i < g->size(); ++i)
        CHECK(std::abs(Lh.values[i] - h.values[i]) < 1e-10);
}

TEST_CASE("Gauss operator on the constant matches the Hurwitz series") {
    TransferStage ts{gauss_stage(64), false, 10000, 1e-3};
    auto g = ts.stage->grid();
    auto Lone = apply_L0(ts, DiscreteFunction::constant(g, 1.0));
    // (L 1)(x) = sum_n (x+n)^{-2}.
    for (std::size_t i = 0; i < g->size(); i += 7)
        CHECK(std::abs(Lone.values[i] - cheb::hurwitz_zeta(2.0, g->xs[i] + 1.0)) < 1e-11);
    CHECK(std::abs(evaluate(Lone, 0.0) -
                   std::numbers::pi * std::numbers::pi / 6.0) < 1e-10);
}

TEST_CASE("doubling operator preserves constants") {
    TransferStage ts{doubling_stage(32), false, 100, 1e-3};
    auto g = ts.stage->grid();
    auto Lone = apply_L0(ts, DiscreteFunction::constant(g, 1.0));
    for (const Complex& v : Lone.values) CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("twist identity: L_z f = L_0(f e^{z u})") {
    SUBCASE("interval stage, coordinate observable") {
        TransferStage ts{doubling_stage(32), false, 100, 1e-3};
        auto g = ts.stage->grid();
        auto u = Potential::coordinate();
        const Complex z(0.3, -0.7);
        std::vector<Complex> fv(g->size()), gv(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) {
            double x = g->xs[i];
            fv[i] = Complex(std::cos(2.0 * x), 0.25 * x);
            gv[i] = fv[i] * std::exp(z * x);
        }
        auto lhs = apply_Lz(ts, u, z, DiscreteFunction(g, fv));
        auto rhs = apply_L0(ts, DiscreteFunction(g, gv));
        for (std::size_t i = 0; i < g->size(); ++i)
            CHECK(std::abs(lhs.values[i] - rhs.values[i]) < 1e-9);
    }
    SUBCASE("full shift, first-symbol observable (exact)") {
        TransferStage ts{full_shift_stage({0.3, 0.7}, 4), false, 100, 1e-3};
        auto g = ts.stage->grid();
        auto u = Potential::first_symbol({1.0, -2.0});
        auto uvals = u.values_on(g);
        const Complex z(0.2, 0.5);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        std::vector<Complex> fv(g->size()), gv(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) {
            fv[i] = Complex(d(rng), d(rng));
            gv[i] = fv[i] * std::exp(z * uvals[i]);
        }
        auto lhs = apply_Lz(ts, u, z, DiscreteFunction(g, fv));
        auto rhs = apply_L0(ts, DiscreteFunction(g, gv));
        for (std::size_t i = 0; i < g->size(); ++i)
            CHECK(std::abs(lhs.values[i] - rhs.values[i]) < 1e-13);
    }
}

TEST_CASE("stage operator is linear and adjoint-consistent") {
    TransferStage ts{gauss_stage(24), false, 2000, 1e-2};
    auto g = ts.stage->grid();
    StageOperator op(ts, Potential::coordinate(), Complex(0.1, 0.2));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<Complex> fv(g->size()), gv(g->size()), nu(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        fv[i] = Complex(d(rng), d(rng));
        gv[i] = Complex(d(rng), d(rng));
        nu[i] = Complex(d(rng), d(rng));
    }
    DiscreteFunction f(g, fv), h(g, gv);
    const Complex a(1.5, -0.5), b(0.0, 2.0);
    std::vector<Complex> comb(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) comb[i] = a * fv[i] + b * gv[i];
    auto left = op.apply(DiscreteFunction(g, comb));
    auto rf = op.apply(f), rh = op.apply(h);
    for (std::size_t i = 0; i < g->size(); ++i)
        CHECK(std::abs(left.values[i] - (a * rf.values[i] + b * rh.values[i])) < 1e-12);

    // nu(L f) = (M^T nu)(f) as plain bilinear pairing.
    auto adj = op.apply_adjoint(nu);
    Complex lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        lhs += nu[i] * rf.values[i];
        rhs += adj[i] * fv[i];
    }
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("real twists keep positivity and obey the sup bound") {
    TransferStage ts{doubling_stage(32), false, 100, 1e-3};
    auto g = ts.stage->grid();
    auto u = Potential::coordinate();
    const double t = 0.8;
    auto one = DiscreteFunction::constant(g, 1.0);
    auto Lt = apply_Lz(ts, u, Complex(t, 0.0), one);
    auto L0 = apply_L0(ts, one);
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(Lt.values[i].real() > 0.0);
        CHECK(std::abs(Lt.values[i].imag()) < 1e-14);
        // sup u = 1 on [0,1].
        CHECK(Lt.values[i].real() <= std::exp(t) * L0.values[i].real() + 1e-12);
    }
}

TEST_CASE("window composition: empty window, sequencing, Bernoulli closed form") {
    TransferStage ts{full_shift_stage({0.5, 0.5}, 5), false, 100, 1e-3};
    auto g = ts.stage->grid();
    auto u = Potential::first_symbol({0.0, 1.0});
    const Complex z(0.4, 0.9);

    TwistWindow empty;
    empty.z = z;
    std::vector<Complex> fv(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) fv[i] = Complex(0.1 * i, -0.2);
    DiscreteFunction f(g, fv);
    auto id = compose_window(empty, f);
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(id.values[i] == fv[i]);

    TwistWindow two;
    two.stages = {ts, ts};
    two.potentials = {u, u};
    two.z = z;
    auto seq = apply_Lz(ts, u, z, apply_Lz(ts, u, z, f));
    auto win = compose_window(two, f);
    for (std::size_t i = 0; i < g->size(); ++i)
        CHECK(std::abs(win.values[i] - seq.values[i]) < 1e-12);

    // For the fair coin with u = first symbol, L_z^n 1 = ((1+e^z)/2)^n.
    const int n = 4;
    TwistWindow wn;
    wn.stages.assign(n, ts);
    wn.potentials.assign(n, u);
    wn.z = z;
    auto Ln = compose_window(wn, DiscreteFunction::constant(g, 1.0));
    const Complex expect = std::pow((1.0 + std::exp(z)) / 2.0, n);
    for (const Complex& v : Ln.values) CHECK(std::abs(v - expect) < 1e-12);
}

TEST_CASE("Birkhoff sums: constants, the golden orbit, empty sums") {
    auto st = gauss_stage(16);
    std::vector<std::shared_ptr<const SystemStage>> stages(6, st);
    std::vector<Potential> uc(6, Potential::constant(0.7));
    CHECK(birkhoff_sum(stages, uc, 0, 5, 0.3) == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(birkhoff_sum(stages, uc, 0, 0, 0.3) == 0.0);

    // u = -2 ln x along the golden fixed point: each term is 2 ln((1+sqrt5)/2).
    std::vector<Potential> ul(6, Potential::log_x(-2.0));
    const double gpt = (std::sqrt(5.0) - 1.0) / 2.0;
    const double per = 2.0 * std::log((1.0 + std::sqrt(5.0)) / 2.0);
    CHECK(birkhoff_sum(stages, ul, 0, 4, gpt) == doctest::Approx(4.0 * per).epsilon(1e-12));
}

TEST_CASE("operators preserve the reference measure") {
    SUBCASE("Gauss preserves Lebesgue") {
        TransferStage ts{gauss_stage(48), false, 10000, 1e-3};
        auto g = ts.stage->grid();
        std::vector<Complex> fv(g->size());
        for (std::size_t i = 0; i < g->size(); ++i)
            fv[i] = std::sin(3.0 * g->xs[i]) + 2.0;
        DiscreteFunction f(g, fv);
        CHECK(std::abs(integral(apply_L0(ts, f)) - integral(f)) < 1e-9);
    }
    SUBCASE("doubling preserves Lebesgue") {
        TransferStage ts{doubling_stage(48), false, 100, 1e-3};
        auto g = ts.stage->grid();
        std::vector<Complex> fv(g->size());
        for (std::size_t i = 0; i < g->size(); ++i)
            fv[i] = std::exp(g->xs[i]) * std::cos(g->xs[i]);
        DiscreteFunction f(g, fv);
        CHECK(std::abs(integral(apply_L0(ts, f)) - integral(f)) < 1e-10);
    }
    SUBCASE("plain tower operator preserves the tower measure") {
        auto tower = tower_build(geometric_tower_spec(6, 1));
        TransferStage ts{tower, false, 100, 1e-3};
        auto g = tower->grid();
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        std::vector<Complex> fv(g->size());
        for (auto& v : fv) v = d(rng);
        DiscreteFunction f(g, fv);
        Complex before = 0.0, after = 0.0;
        auto Lf = apply_L0(ts, f);
        for (std::size_t i = 0; i < g->size(); ++i) {
            before += g->masses[i] * f.values[i];
            after += g->masses[i] * Lf.values[i];
        }
        CHECK(std::abs(after - before) < 1e-12);
    }
}

TEST_CASE("weighted tower operator iterates stay bounded in sup norm") {
    auto tower = tower_build(geometric_tower_spec(8, 1));
    TransferStage ts{tower, true, 100, 1e-3};
    auto g = tower->grid();
    StageOperator op(ts, Potential::zero(), 0.0);
    DiscreteFunction cur = DiscreteFunction::constant(g, 1.0);
    double worst = 0.0;
    for (int n = 1; n <= 50; ++n) {
        cur = op.apply(cur);
        worst = std::max(worst, sup_norm(cur));
    }
    CHECK(worst < 20.0);
    CHECK(sup_norm(cur) > 1e-4);  // no collapse either
}

TEST_CASE("branch truncation guards") {
    // Tiny budget with a short branch sum: the certified tail is too large.
    TransferStage tight{gauss_stage(16), false, 10, 1e-12};
    CHECK_THROWS_AS(StageOperator(tight, Potential::zero(), 0.0), TruncationError);

    // Twist exponent at the edge of convergence: kappa = 2 - 2 * 0.5 = 1.
    TransferStage ts{gauss_stage(16), false, 10000, 1e-3};
    CHECK_THROWS_AS(StageOperator(ts, Potential::log_x(-2.0), Complex(0.5, 0.0)),
                    TruncationError);
}

TEST_CASE("sequential expansion bound holds on checkable examples") {
    SUBCASE("constant function is trivial") {
        TransferStage ts{doubling_stage(24), false, 100, 1e-3};
        TwistWindow w;
        w.stages.assign(3, ts);
        w.potentials.assign(3, Potential::coordinate());
        w.z = 0.0;
        auto rep = lasota_yorke_report(
            w, DiscreteFunction::constant(ts.stage->grid(), 1.0));
        CHECK(rep.holds);
        CHECK(rep.sup_L0_one == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("Gauss window with a complex twist") {
        TransferStage ts{gauss_stage(32), false, 10000, 1e-2};
        auto g = ts.stage->grid();
        TwistWindow w;
        w.stages.assign(4, ts);
        w.potentials.assign(4, Potential::coordinate());
        w.z = Complex(0.1, 0.2);
        std::vector<Complex> fv(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) fv[i] = g->xs[i];
        auto rep = lasota_yorke_report(w, DiscreteFunction(g, fv));
        CHECK(rep.holds);
        CHECK(rep.lhs > 0.0);
        CHECK(rep.Q == doctest::Approx(2.0));
    }
    SUBCASE("tower stages are rejected") {
        auto tower = tower_build(geometric_tower_spec(4, 1));
        TwistWindow w;
        w.stages = {{tower, true, 100, 1e-3}};
        w.potentials = {Potential::zero()};
        CHECK_THROWS_AS(
            lasota_yorke_report(w, DiscreteFunction::constant(tower->grid(), 1.0)),
            ValidationError);
    }
}

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rpfcone/errors.hpp"
#include "rpfcone/stats.hpp"

using namespace rpfcone;

namespace {

WindowFactory bernoulli_factory(int P = 1) {
    return [P](Complex z) {
        TransferStage ts{full_shift_stage({0.5, 0.5}, 4), false, 100, 1e-3};
        TwistWindow w;
        w.stages.assign(P, ts);
        w.potentials.assign(P, Potential::first_symbol({0.0, 1.0}));
        w.z = z;
        return w;
    };
}

WindowFactory gauss_log_factory(int nodes = 48) {
    return [nodes](Complex z) {
        TransferStage ts{gauss_stage(nodes), false, 10000, 1e-2};
        TwistWindow w;
        w.stages = {ts};
        w.potentials = {Potential::log_x(-2.0)};
        w.z = z;
        return w;
    };
}

}  // namespace

TEST_CASE("quadrature oracle: smooth and log-singular integrands") {
    CHECK(std::abs(integrate_tanh_sinh([](double x) { return x * x; }) - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(integrate_tanh_sinh([](double x) { return std::log(x); }) + 1.0) < 1e-10);
    CHECK(std::abs(integrate_tanh_sinh([](double x) {
              return 1.0 / (std::log(2.0) * (1.0 + x));
          }) - 1.0) < 1e-12);
}

TEST_CASE("Lyapunov oracle hits the classical closed form") {
    const double expect =
        std::numbers::pi * std::numbers::pi / (6.0 * std::log(2.0));
    CHECK(std::abs(gauss_lyapunov_oracle() - expect) < 1e-10);
}

TEST_CASE("dense spectrum oracle: leading pair and subleading constant") {
    auto sp = gauss_spectrum_oracle(64);
    REQUIRE(sp.eigenvalues.size() >= 2);
    CHECK(std::abs(sp.eigenvalues[0] - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(sp.eigenvalues[1]) - 0.3036630029) < 1e-8);

    auto g = sp.leading.grid;
    for (std::size_t i = 0; i < g->size(); ++i) {
        double expect = 1.0 / (std::log(2.0) * (1.0 + g->xs[i]));
        CHECK(std::abs(sp.leading.values[i] - expect) < 1e-8);
    }

    // Node-count stability of the subleading modulus.
    auto sp2 = gauss_spectrum_oracle(80);
    CHECK(std::abs(std::abs(sp2.eigenvalues[1]) - std::abs(sp.eigenvalues[1])) < 1e-10);

    CHECK_THROWS_AS(gauss_spectrum_oracle(8), ValidationError);
}

TEST_CASE("pressure sampling: fair-coin closed form and convexity") {
    auto curve = pressure_samples(bernoulli_factory(), 0.25, 16);
    REQUIRE(curve.failures.empty());
    REQUIRE(curve.circle_z.size() == 16);
    for (std::size_t k = 0; k < curve.circle_z.size(); ++k) {
        Complex expect = std::log((1.0 + std::exp(curve.circle_z[k])) / 2.0);
        CHECK(std::abs(curve.circle_vals[k] - expect) < 1e-10);
    }
    REQUIRE(curve.segment_t.size() == 3);
    CHECK(curve.segment_t[1] == 0.0);
    CHECK(std::abs(curve.segment_vals[1]) < 1e-12);  // pressure(0) = 0
    // Convexity on the real axis.
    CHECK(curve.segment_vals[0] + curve.segment_vals[2] >=
          2.0 * curve.segment_vals[1] - 1e-12);

    CHECK_THROWS_AS(pressure_samples(bernoulli_factory(), -0.1, 16), ValidationError);
    CHECK_THROWS_AS(pressure_samples(bernoulli_factory(), 0.25, 2), ValidationError);
}

TEST_CASE("moment extraction: fair coin mean 1/2 variance 1/4") {
    auto curve = pressure_samples(bernoulli_factory(), 0.25, 16);
    auto est = lambda_derivatives(curve);
    CHECK(std::abs(est.mean - 0.5) < 1e-10);
    CHECK(std::abs(est.variance - 0.25) < 1e-8);
    // The cross error carries the O(h^2) truncation of the step-rho/8 central
    // differences, so it sits near 1e-5 rather than machine precision.
    CHECK(est.cross_error < 5e-5);
    CHECK(std::abs(est.mean - est.mean_fd) <= est.cross_error + 1e-15);

    // A multi-stage window reports per-step moments too.
    auto curve3 = pressure_samples(bernoulli_factory(3), 0.25, 16);
    auto est3 = lambda_derivatives(curve3);
    CHECK(std::abs(est3.mean - 0.5) < 1e-10);
    CHECK(std::abs(est3.variance - 0.25) < 1e-7);
}

TEST_CASE("moment extraction: Gauss map Lyapunov exponent") {
    auto curve = pressure_samples(gauss_log_factory(), 0.02, 16);
    auto est = lambda_derivatives(curve, 1e-3);
    CHECK(std::abs(est.mean - 2.3731382) < 1e-5);
    CHECK(est.variance > 0.0);
    CHECK(est.cross_error < 1e-3);
}

TEST_CASE("constant observables have zero variance and no CLT") {
    auto factory = [](Complex z) {
        TransferStage ts{doubling_stage(16), false, 100, 1e-3};
        TwistWindow w;
        w.stages = {ts};
        w.potentials = {Potential::constant(0.7)};
        w.z = z;
        return w;
    };
    auto est = lambda_derivatives(pressure_samples(factory, 0.2, 16));
    CHECK(std::abs(est.mean - 0.7) < 1e-10);
    CHECK(std::abs(est.variance) < 1e-8);

    CltParams p;
    p.model = CltModel::ConstantObservable;
    p.mean = 0.7;
    p.variance = 0.0;
    p.constant_c = 0.7;
    CHECK_THROWS_AS(monte_carlo_clt(p), DegeneracyError);
}

TEST_CASE("CLT harness: fair coin standardized sums look normal") {
    CltParams p;
    p.model = CltModel::BernoulliFirstSymbol;
    p.n = 1000;
    p.trials = 5000;
    p.seed = 42;
    p.mean = 0.5;
    p.variance = 0.25;
    auto rep = monte_carlo_clt(p);
    CHECK(rep.trials == 5000);
    CHECK(rep.ks >= 0.0);
    CHECK(rep.ks <= 1.0);
    CHECK(rep.ks < 0.05);
    CHECK(std::abs(rep.empirical_mean_rate - 0.5) < 0.01);
    CHECK(std::abs(rep.empirical_variance - 1.0) < 0.15);
    for (std::size_t i = 1; i < rep.standardized.size(); ++i)
        CHECK(rep.standardized[i] >= rep.standardized[i - 1]);

    // Bit-identical rerun with the same seed.
    auto rep2 = monte_carlo_clt(p);
    CHECK(rep2.ks == rep.ks);
    for (std::size_t i = 0; i < rep.standardized.size(); ++i)
        CHECK(rep2.standardized[i] == rep.standardized[i]);

    // A different seed moves the sample.
    CltParams q = p;
    q.seed = 43;
    auto rep3 = monte_carlo_clt(q);
    CHECK(rep3.standardized != rep.standardized);
}

TEST_CASE("CLT harness: Gauss-map log-derivative sums") {
    CltParams p;
    p.model = CltModel::GaussLogDerivative;
    p.n = 500;
    p.trials = 2000;
    p.seed = 7;
    p.mean = 2.3731382;
    p.variance = 3.5;  // rough; KS tolerance absorbs the scaling slack
    auto curve = pressure_samples(gauss_log_factory(), 0.02, 16);
    auto est = lambda_derivatives(curve, 1e-3);
    p.variance = est.variance;
    auto rep = monte_carlo_clt(p);
    CHECK(rep.ks < 0.06);
    CHECK(std::abs(rep.empirical_mean_rate - p.mean) < 0.05);
    CHECK(std::abs(rep.empirical_variance - 1.0) < 0.2);
}

TEST_CASE("KS distance: hand values") {
    // Median-only sample: |Phi(0) - {0 or 1}| = 1/2.
    CHECK(ks_to_standard_normal({0.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ks_to_standard_normal({}), ValidationError);
    // Large equispaced normal scores come out small.
    std::vector<double> probit;
    const int N = 2000;
    for (int i = 1; i <= N; ++i) {
        double u = (i - 0.5) / N;
        // crude inverse via bisection on erfc
        double lo = -8.0, hi = 8.0;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
            (cdf < u ? lo : hi) = mid;
        }
        probit.push_back(0.5 * (lo + hi));
    }
    CHECK(ks_to_standard_normal(probit) < 1e-3);
}

#include "rpfcone/stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "rpfcone/errors.hpp"

namespace rpfcone {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double window_pressure(const TwistWindow& w, const RPFConfig& cfg, double* imag_raw) {
    RPFTriplet t = solve_rpf(w, cfg);
    Complex lam = t.lambda_product();
    const double n = static_cast<double>(w.stages.size());
    if (imag_raw) *imag_raw = std::arg(lam) / n;
    return std::log(std::abs(lam)) / n;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

PressureCurve pressure_samples(const WindowFactory& make_window, double rho, int k_points,
                               const RPFConfig& cfg) {
    if (rho <= 0.0 || k_points < 4)
        throw ValidationError("pressure sampling needs rho > 0 and at least 4 circle points");
    PressureCurve curve;
    curve.rho = rho;
    curve.window_length = static_cast<int>(make_window(0.0).stages.size());

    // Circle samples, with the imaginary part of the log unwrapped along the
    // circle starting from the positive real axis (where lambda is near the
    // positive reals for small rho).
    double prev_arg = 0.0;
    for (int k = 0; k < k_points; ++k) {
        const double th = kTwoPi * k / k_points;
        const Complex z = rho * Complex(std::cos(th), std::sin(th));
        curve.circle_z.push_back(z);
        try {
            double arg = 0.0;
            const double re = window_pressure(make_window(z), cfg, &arg);
            while (arg - prev_arg > std::numbers::pi) arg -= kTwoPi;
            while (arg - prev_arg < -std::numbers::pi) arg += kTwoPi;
            prev_arg = arg;
            curve.circle_vals.emplace_back(re, arg);
        } catch (const std::exception& e) {
            curve.circle_vals.emplace_back(Grid::inf, 0.0);
            curve.failures.push_back("circle point " + std::to_string(k) + ": " + e.what());
        }
    }

    const double h = rho / 8.0;
    for (double t : {-h, 0.0, h}) {
        curve.segment_t.push_back(t);
        try {
            curve.segment_vals.push_back(window_pressure(make_window(t), cfg, nullptr));
        } catch (const std::exception& e) {
            curve.segment_vals.push_back(Grid::inf);
            curve.failures.push_back("segment point t=" + std::to_string(t) + ": " + e.what());
        }
    }
    return curve;
}

MomentEstimates lambda_derivatives(const PressureCurve& curve, double cross_tol) {
    const std::size_t K = curve.circle_vals.size();
    if (K < 4 || curve.segment_vals.size() != 3)
        throw ValidationError("pressure curve is degenerate");
    if (!curve.failures.empty())
        throw ValidationError("pressure curve carries solver failures: " + curve.failures.front());

    auto fourier = [&](int m) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double th = kTwoPi * static_cast<double>(k) * m / static_cast<double>(K);
            acc += curve.circle_vals[k] * Complex(std::cos(th), -std::sin(th));
        }
        return acc / static_cast<double>(K);
    };

    MomentEstimates est;
    est.mean = (fourier(1) / curve.rho).real();
    est.variance = 2.0 * (fourier(2) / (curve.rho * curve.rho)).real();

    const double h = curve.rho / 8.0;
    const double vm = curve.segment_vals[0], v0 = curve.segment_vals[1],
                 vp = curve.segment_vals[2];
    est.mean_fd = (vp - vm) / (2.0 * h);
    est.variance_fd = (vp - 2.0 * v0 + vm) / (h * h);

    est.cross_error =
        std::max(std::abs(est.mean - est.mean_fd), std::abs(est.variance - est.variance_fd));
    if (est.cross_error > cross_tol)
        throw ConvergenceError("derivative methods disagree beyond the requested tolerance",
                               {est.cross_error});
    return est;
}

double ks_to_standard_normal(const std::vector<double>& sorted_sample) {
    const std::size_t N = sorted_sample.size();
    if (N == 0) throw ValidationError("empty sample");
    double ks = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double F = standard_normal_cdf(sorted_sample[i]);
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / N - F));
        ks = std::max(ks, std::abs(F - static_cast<double>(i) / N));
    }
    return ks;
}

CltReport monte_carlo_clt(const CltParams& p) {
    if (p.n < 1 || p.trials < 1) throw ValidationError("CLT harness needs n, trials >= 1");
    if (p.model == CltModel::ConstantObservable || p.variance <= 1e-12)
        throw DegeneracyError(
            "degenerate CLT: the observable has (numerically) zero asymptotic variance");

    CltReport rep;
    rep.trials = p.trials;
    rep.n = p.n;
    rep.standardized.reserve(p.trials);
    const double scale = std::sqrt(static_cast<double>(p.n) * p.variance);

    double sum_rate = 0.0;
    for (int t = 0; t < p.trials; ++t) {
        std::mt19937_64 rng(splitmix64(p.seed ^ (0x9e3779b97f4a7c15ULL * (t + 1ULL))));
        double S = 0.0;
        if (p.model == CltModel::BernoulliFirstSymbol) {
            // S_n counts ones among n fair bits: draw 64 at a time.
            long ones = 0;
            int left = p.n;
            while (left >= 64) {
                ones += std::popcount(rng());
                left -= 64;
            }
            if (left > 0) ones += std::popcount(rng() >> (64 - left));
            S = static_cast<double>(ones);
        } else {  // GaussLogDerivative
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            double x = std::exp2(unif(rng)) - 1.0;  // stationary start
            for (int k = 0; k < p.n; ++k) {
                if (x < 1e-300) x = 0.5;  // unreachable in finite simulations
                S += -2.0 * std::log(x);
                const double y = 1.0 / x;
                x = y - std::floor(y);
            }
        }
        sum_rate += S / p.n;
        rep.standardized.push_back((S - p.n * p.mean) / scale);
    }
    rep.empirical_mean_rate = sum_rate / p.trials;

    double m = 0.0;
    for (double v : rep.standardized) m += v;
    m /= p.trials;
    double var = 0.0;
    for (double v : rep.standardized) var += (v - m) * (v - m);
    rep.empirical_variance = var / std::max(1, p.trials - 1);

    std::sort(rep.standardized.begin(), rep.standardized.end());
    rep.ks = ks_to_standard_normal(rep.standardized);
    return rep;
}

SpectrumOracle gauss_spectrum_oracle(int nodes, long truncation_N) {
    if (nodes < 16) throw ValidationError("spectrum oracle needs at least 16 nodes");
    StageOperator op(TransferStage{gauss_stage(nodes), false, truncation_N, 1e-3},
                     Potential::zero(), 0.0);
    Eigen::MatrixXd M = op.dense().real();
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolve failed", {});

    SpectrumOracle out;
    std::vector<int> order(nodes);
    for (int i = 0; i < nodes; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
    });
    for (int i : order) out.eigenvalues.push_back(es.eigenvalues()[i]);

    Eigen::VectorXcd v = es.eigenvectors().col(order[0]);
    const auto gp = op.grid();
    std::vector<Complex> vals(v.data(), v.data() + v.size());
    DiscreteFunction lead(gp, std::move(vals));
    Complex mass = integral(lead);
    for (Complex& x : lead.values) x /= mass;
    out.leading = std::move(lead);
    return out;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, int levels) {
    // Nodes x = (1 + tanh((pi/2) sinh t))/2 over (0,1); doubling h-refinement.
    double h = 1.0;
    auto node_term = [&](double t) {
        const double s = std::numbers::pi / 2.0 * std::sinh(t);
        const double c = std::cosh(s);
        const double x = 0.5 * (1.0 + std::tanh(s));
        const double w = std::numbers::pi / 4.0 * std::cosh(t) / (c * c);
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return w * f(x);
    };
    double integral_ = node_term(0.0);
    for (int k = 1; k <= 6; ++k) integral_ += node_term(k * h) + node_term(-k * h);
    for (int lvl = 1; lvl <= levels; ++lvl) {
        h *= 0.5;
        double add = 0.0;
        for (int k = 1;; k += 2) {
            const double t = k * h;
            if (t > 6.5) break;
            add += node_term(t) + node_term(-t);
        }
        integral_ = 0.5 * integral_ + h * add;
    }
    return integral_;
}

double gauss_lyapunov_oracle() {
    return integrate_tanh_sinh(
        [](double x) { return -2.0 * std::log(x) / (std::numbers::ln2 * (1.0 + x)); });
}

}  // namespace rpfcone

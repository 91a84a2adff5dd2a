// Command-line front end: parses an experiment config, runs the requested
// pipeline, and writes JSON/CSV reports plus a manifest into the output dir.

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rpfcone/cones.hpp"
#include "rpfcone/config.hpp"
#include "rpfcone/errors.hpp"
#include "rpfcone/report.hpp"
#include "rpfcone/rpf.hpp"
#include "rpfcone/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rpfcone;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    std::string metrics_file_a, metrics_file_b;
};

std::string resolve_out_dir(const CliOptions& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    if (const char* env = std::getenv("RPFCONE_OUT"); env && *env) return env;
    return ".";
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

ExperimentConfig load_and_seed(const CliOptions& opt) {
    if (opt.config_path.empty()) throw ValidationError("missing --config");
    ExperimentConfig cfg = load_config_file(opt.config_path);
    if (opt.seed_set) cfg.statistics.seed = opt.seed;
    return cfg;
}

TwistWindow make_window(const ExperimentConfig& cfg, Complex z) {
    auto stage = make_stage(cfg);
    TwistWindow w;
    w.z = z;
    const bool tower = stage->kind() == SystemStage::Kind::Tower;
    for (int m = 0; m < cfg.solver.window; ++m) {
        w.stages.push_back(
            TransferStage{stage, tower, cfg.discretization.truncation_N, 1e-3});
        w.potentials.push_back(make_potential(cfg, stage->grid()));
    }
    return w;
}

std::vector<Complex> twist_list(const ExperimentConfig& cfg) {
    std::vector<Complex> zs;
    for (std::size_t i = 0; i < cfg.twist.z_re.size(); ++i)
        zs.emplace_back(cfg.twist.z_re[i], cfg.twist.z_im[i]);
    if (zs.empty()) zs.emplace_back(0.0, 0.0);
    return zs;
}

RPFConfig solver_config(const ExperimentConfig& cfg) {
    RPFConfig rc;
    rc.tol = cfg.solver.tol;
    rc.max_iters = cfg.solver.max_iters;
    rc.boundary = cfg.solver.boundary == "truncated" ? BoundaryMode::Truncated
                                                     : BoundaryMode::Periodic;
    return rc;
}

void finish_report(const ExperimentConfig& cfg, const std::string& dir, json& body) {
    body["config_fnv1a"] = config_hash(cfg.raw_text);
    body["seed"] = cfg.statistics.seed;
    write_text_file((fs::path(dir) / (cfg.output.prefix + ".json")).string(),
                    body.dump(2) + "\n");
    emit_manifest(dir, cfg.raw_text, cfg.statistics.seed);
}

int cmd_spectrum(const CliOptions& opt) {
    ExperimentConfig cfg = load_and_seed(opt);
    if (cfg.system.kind != "gauss")
        throw ValidationError("the spectrum oracle is defined for system.kind = gauss");
    const std::string dir = resolve_out_dir(opt);
    SpectrumOracle sp =
        gauss_spectrum_oracle(cfg.discretization.nodes, cfg.discretization.truncation_N);

    json body;
    body["pipeline"] = "spectrum";
    body["nodes"] = cfg.discretization.nodes;
    body["leading_eigenvalue"] = complex_json(sp.eigenvalues[0]);
    body["second_eigenvalue"] = complex_json(sp.eigenvalues[1]);
    body["second_modulus"] = std::abs(sp.eigenvalues[1]);
    json evs = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(sp.eigenvalues.size(), 16); ++i)
        evs.push_back(complex_json(sp.eigenvalues[i]));
    body["eigenvalues_by_modulus"] = evs;

    std::vector<std::vector<std::string>> rows;
    const Grid& g = *sp.leading.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::ostringstream x, v;
        x.precision(17);
        v.precision(17);
        x << g.xs[i];
        v << sp.leading.values[i].real();
        rows.push_back({std::to_string(i), x.str(), v.str()});
    }
    write_csv((fs::path(dir) / (cfg.output.prefix + "-density.csv")).string(),
              {"node", "x", "density"}, rows);
    finish_report(cfg, dir, body);
    return 0;
}

int cmd_rpf(const CliOptions& opt) {
    ExperimentConfig cfg = load_and_seed(opt);
    const std::string dir = resolve_out_dir(opt);
    RPFConfig rc = solver_config(cfg);

    json body;
    body["pipeline"] = "rpf";
    json runs = json::array();
    std::vector<std::vector<std::string>> rows;
    for (Complex z : twist_list(cfg)) {
        TwistWindow w = make_window(cfg, z);
        RPFTriplet t = solve_rpf(w, rc);
        auto rr = rpf_residuals(t, w);
        json run;
        run["z"] = complex_json(z);
        run["lambda"] = json::array();
        double worst_eig = 0.0, worst_dual = 0.0;
        for (std::size_t m = 0; m < t.lambda.size(); ++m) {
            run["lambda"].push_back(complex_json(t.lambda[m]));
            worst_eig = std::max(worst_eig, rr[m].eigen_eq);
            worst_dual = std::max(worst_dual, rr[m].dual_eq);
            std::ostringstream zs, lr, li, re, rd;
            zs.precision(17);
            lr.precision(17);
            li.precision(17);
            re.precision(17);
            rd.precision(17);
            zs << z.real() << "+" << z.imag() << "i";
            lr << t.lambda[m].real();
            li << t.lambda[m].imag();
            re << rr[m].eigen_eq;
            rd << rr[m].dual_eq;
            rows.push_back({zs.str(), std::to_string(m), lr.str(), li.str(), re.str(), rd.str()});
        }
        run["lambda_product"] = complex_json(t.lambda_product());
        run["worst_eigen_residual"] = worst_eig;
        run["worst_dual_residual"] = worst_dual;
        run["cycles"] = t.trace.size();
        runs.push_back(run);
    }
    body["runs"] = runs;
    write_csv((fs::path(dir) / (cfg.output.prefix + "-triplets.csv")).string(),
              {"z", "stage", "lambda_re", "lambda_im", "eigen_residual", "dual_residual"}, rows);
    finish_report(cfg, dir, body);
    return 0;
}

int cmd_cones(const CliOptions& opt) {
    ExperimentConfig cfg = load_and_seed(opt);
    const std::string dir = resolve_out_dir(opt);
    auto stage = make_stage(cfg);
    std::mt19937_64 rng(cfg.statistics.seed);

    json body;
    body["pipeline"] = "cones";
    if (stage->kind() == SystemStage::Kind::Tower) {
        auto tower = std::dynamic_pointer_cast<const TowerStage>(stage);
        TowerConeParams params;
        params.a = cfg.cone.a;
        params.b = cfg.cone.b;
        params.c = cfg.cone.c;
        params.eps0 = cfg.cone.eps0;
        TowerConeFamily cone = tower_functional_family(params, tower);
        body["cone"] = {{"kind", "tower"},
                        {"a", cone.params.a},
                        {"b", cone.params.b},
                        {"c", cone.params.c},
                        {"c1", cone.params.c1},
                        {"c2", cone.params.c2},
                        {"D", cone.params.D},
                        {"functionals", cone.family.size()}};
        std::vector<DiscreteFunction> sample;
        for (int i = 0; i < 8; ++i) sample.push_back(sample_tower_cone_element(cone, rng));
        TwistWindow w0 = make_window(cfg, 0.0);
        InvarianceReport inv = invariance_check(cone.family, w0, sample);
        body["invariance"] = {{"all_inside", inv.all_inside},
                              {"failures", inv.failures},
                              {"image_diameter", inv.image_diameter}};
    } else {
        LogHolderConeParams params;
        params.s = cfg.cone.s;
        params.Q = cfg.cone.Q;
        params.alpha = cfg.cone.alpha;
        params.xi = cfg.cone.xi;
        const double d0 = params.d0(stage->gamma());
        auto family = logholder_family(params, stage->grid());
        body["cone"] = {{"kind", "log-holder"}, {"s", params.s}, {"Q", params.Q},
                        {"d0", d0},             {"functionals", family.size()}};
        std::vector<DiscreteFunction> sample;
        for (int i = 0; i < 8; ++i)
            sample.push_back(sample_logholder_element(params, stage->grid(), rng));
        TwistWindow w0 = make_window(cfg, 0.0);
        InvarianceReport inv = invariance_check(family, w0, sample);
        body["invariance"] = {{"all_inside", inv.all_inside},
                              {"failures", inv.failures},
                              {"image_diameter", inv.image_diameter}};
        Complex z = twist_list(cfg).front();
        if (std::abs(z) > 0.0) {
            TwistWindow wz = make_window(cfg, z);
            DominationReport dom = domination_epsilon(family, wz, sample, d0, params.s);
            body["domination"] = {{"epsilon", dom.epsilon},
                                  {"delta_eps", dom.delta_eps},
                                  {"contraction_ok", dom.contraction_ok},
                                  {"analytic_bound", dom.analytic_bound}};
        }
    }
    finish_report(cfg, dir, body);
    return 0;
}

int cmd_clt(const CliOptions& opt) {
    ExperimentConfig cfg = load_and_seed(opt);
    const std::string dir = resolve_out_dir(opt);
    RPFConfig rc = solver_config(cfg);

    CltModel model;
    if (cfg.system.kind == "full-shift" && cfg.twist.u == "first-symbol")
        model = CltModel::BernoulliFirstSymbol;
    else if (cfg.system.kind == "gauss" && cfg.twist.u == "log-x")
        model = CltModel::GaussLogDerivative;
    else if (cfg.twist.u == "constant" || cfg.twist.u == "zero")
        model = CltModel::ConstantObservable;
    else
        throw ValidationError(
            "clt supports full-shift/first-symbol, gauss/log-x, or constant observables");

    auto factory = [&](Complex z) { return make_window(cfg, z); };
    PressureCurve curve = pressure_samples(factory, cfg.twist.rho, cfg.twist.k_points, rc);
    MomentEstimates mo = lambda_derivatives(curve, 1e-3);

    CltParams p;
    p.model = model;
    p.n = cfg.statistics.n;
    p.trials = cfg.statistics.trials;
    p.seed = cfg.statistics.seed;
    p.mean = mo.mean;
    p.variance = mo.variance;
    p.constant_c = cfg.twist.coef;
    CltReport rep = monte_carlo_clt(p);

    json body;
    body["pipeline"] = "clt";
    body["moments"] = {{"mean", mo.mean},
                       {"variance", mo.variance},
                       {"mean_fd", mo.mean_fd},
                       {"variance_fd", mo.variance_fd},
                       {"cross_error", mo.cross_error}};
    body["clt"] = {{"n", rep.n},
                   {"trials", rep.trials},
                   {"ks", rep.ks},
                   {"empirical_mean_rate", rep.empirical_mean_rate},
                   {"empirical_variance", rep.empirical_variance}};

    std::vector<std::vector<std::string>> rows;
    const int buckets = 41;
    std::vector<int> counts(buckets, 0);
    for (double v : rep.standardized) {
        int b = static_cast<int>(std::floor((v + 4.1) / 0.2));
        if (b >= 0 && b < buckets) ++counts[b];
    }
    for (int b = 0; b < buckets; ++b) {
        std::ostringstream lo;
        lo.precision(17);
        lo << (-4.1 + 0.2 * b);
        rows.push_back({lo.str(), std::to_string(counts[b])});
    }
    write_csv((fs::path(dir) / (cfg.output.prefix + "-histogram.csv")).string(),
              {"bucket_lo", "count"}, rows);
    finish_report(cfg, dir, body);
    return 0;
}

int cmd_ly_check(const CliOptions& opt) {
    ExperimentConfig cfg = load_and_seed(opt);
    const std::string dir = resolve_out_dir(opt);
    auto stage = make_stage(cfg);
    if (stage->kind() == SystemStage::Kind::Tower)
        throw ValidationError("ly-check covers covering-map stages only");
    std::mt19937_64 rng(cfg.statistics.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> len(1, 8);

    const auto gp = stage->grid();
    int violations = 0;
    const int trials = 50;
    std::vector<std::vector<std::string>> rows;
    for (int t = 0; t < trials; ++t) {
        Complex z(unif(rng), unif(rng));
        z /= std::max(1.0, std::abs(z));
        const int n = len(rng);
        // Smooth random test functions: low-order trigonometric series whose
        // node seminorm matches the Holder seminorm of the underlying function
        // (rough i.i.d. node noise lies outside the controlled class).
        std::vector<double> ac(5), as(5), bc(5), bs(5);
        for (int k = 0; k < 5; ++k) {
            ac[k] = 0.3 * unif(rng);
            as[k] = 0.3 * unif(rng);
            bc[k] = 0.1 * unif(rng);
            bs[k] = 0.1 * unif(rng);
        }
        std::vector<Complex> vals(gp->size());
        for (std::size_t i = 0; i < gp->size(); ++i) {
            const double x = gp->xs[i];
            double re = 1.5, im = 0.0;
            for (int k = 0; k < 5; ++k) {
                const double w = 2.0 * std::numbers::pi * (k + 1) * x;
                const double damp = (k + 1.0) * (k + 1.0);
                re += (ac[k] * std::cos(w) + as[k] * std::sin(w)) / damp;
                im += (bc[k] * std::cos(w) + bs[k] * std::sin(w)) / damp;
            }
            vals[i] = Complex(re, im);
        }
        DiscreteFunction f(gp, std::move(vals));

        TwistWindow w = make_window(cfg, z);
        while (static_cast<int>(w.stages.size()) < n) {
            w.stages.push_back(w.stages.front());
            w.potentials.push_back(w.potentials.front());
        }
        w.stages.resize(n);
        w.potentials.resize(n);
        LYReport rep = lasota_yorke_report(w, f);
        if (!rep.holds) ++violations;
        std::ostringstream zs, lhs, rhs;
        zs.precision(17);
        lhs.precision(17);
        rhs.precision(17);
        zs << z.real() << "+" << z.imag() << "i";
        lhs << rep.lhs;
        rhs << rep.rhs;
        rows.push_back({std::to_string(t), zs.str(), std::to_string(n), lhs.str(), rhs.str(),
                        rep.holds ? "1" : "0"});
    }
    json body;
    body["pipeline"] = "ly-check";
    body["trials"] = trials;
    body["violations"] = violations;
    write_csv((fs::path(dir) / (cfg.output.prefix + "-ly.csv")).string(),
              {"trial", "z", "n", "lhs", "rhs", "holds"}, rows);
    finish_report(cfg, dir, body);
    if (violations > 0) throw ConvergenceError("inequality violated on sampled windows", {});
    return 0;
}

int cmd_metrics(const CliOptions& opt) {
    ExperimentConfig cfg = load_and_seed(opt);
    const std::string dir = resolve_out_dir(opt);
    auto stage = make_stage(cfg);
    const auto gp = stage->grid();

    auto load_values = [&](const std::string& path) {
        json j = json::parse(read_text_file(path));
        const json& arr = j.is_array() ? j : j.at("values");
        std::vector<Complex> vals;
        for (const auto& e : arr) {
            if (e.is_array())
                vals.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
            else
                vals.emplace_back(e.get<double>(), 0.0);
        }
        return DiscreteFunction(gp, std::move(vals));
    };
    DiscreteFunction f = load_values(opt.metrics_file_a);
    DiscreteFunction g = load_values(opt.metrics_file_b);

    LogHolderConeParams params;
    params.s = cfg.cone.s;
    params.Q = cfg.cone.Q;
    params.alpha = cfg.cone.alpha;
    params.xi = cfg.cone.xi;
    FunctionalFamily family = logholder_family(params, gp);

    json body;
    body["pipeline"] = "metrics";
    if (f.is_real(1e-14) && g.is_real(1e-14))
        body["hilbert_distance"] = hilbert_distance(family, f, g);
    body["delta_distance"] = delta_distance(family, f, g);
    finish_report(cfg, dir, body);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Projective-metric transfer-operator toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    CliOptions opt;
    app.add_option("--config", opt.config_path, "Experiment config (TOML)");
    app.add_option("--out", opt.out_dir, "Output directory (default $RPFCONE_OUT or .)");
    auto* seed_opt = app.add_option("--seed", opt.seed, "Override statistics.seed");
    app.add_option("--threads", opt.threads, "Worker threads (reports are single-threaded)");

    auto* spectrum = app.add_subcommand("spectrum", "Dense eigensolve oracle");
    auto* rpf = app.add_subcommand("rpf", "Dominant-triplet solve at the configured twists");
    auto* cones = app.add_subcommand("cones", "Cone construction, invariance, domination");
    auto* clt = app.add_subcommand("clt", "Pressure derivatives and empirical CLT");
    auto* ly = app.add_subcommand("ly-check", "Sampled norm-inequality verification");
    auto* metrics = app.add_subcommand("metrics", "Projective distances between two functions");
    metrics->add_option("file_a", opt.metrics_file_a, "First function (JSON values)")->required();
    metrics->add_option("file_b", opt.metrics_file_b, "Second function (JSON values)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opt.seed_set = seed_opt->count() > 0;

    try {
        if (spectrum->parsed()) return cmd_spectrum(opt);
        if (rpf->parsed()) return cmd_rpf(opt);
        if (cones->parsed()) return cmd_cones(opt);
        if (clt->parsed()) return cmd_clt(opt);
        if (ly->parsed()) return cmd_ly_check(opt);
        if (metrics->parsed()) return cmd_metrics(opt);
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 3;
    } catch (const TruncationError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 3;
    } catch (const DegeneracyError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

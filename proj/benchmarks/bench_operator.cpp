#include <benchmark/benchmark.h>

#include <random>

#include "rpfcone/cones.hpp"
#include "rpfcone/rpf.hpp"

using namespace rpfcone;

namespace {

void BM_GaussOperatorBuild(benchmark::State& state) {
    const int nodes = static_cast<int>(state.range(0));
    TransferStage ts{gauss_stage(nodes), false, 10000, 1e-2};
    for (auto _ : state) {
        StageOperator op(ts, Potential::coordinate(), Complex(0.1, 0.2));
        benchmark::DoNotOptimize(op.tail_bound());
    }
}
BENCHMARK(BM_GaussOperatorBuild)->Arg(32)->Arg(64)->Arg(128);

void BM_GaussOperatorApply(benchmark::State& state) {
    const int nodes = static_cast<int>(state.range(0));
    TransferStage ts{gauss_stage(nodes), false, 10000, 1e-2};
    StageOperator op(ts, Potential::coordinate(), Complex(0.1, 0.2));
    auto f = DiscreteFunction::constant(ts.stage->grid(), 1.0);
    for (auto _ : state) {
        auto out = op.apply(f);
        benchmark::DoNotOptimize(out.values.data());
    }
}
BENCHMARK(BM_GaussOperatorApply)->Arg(32)->Arg(64)->Arg(128);

void BM_SolveTriplet(benchmark::State& state) {
    const int nodes = static_cast<int>(state.range(0));
    TwistWindow w;
    w.stages = {{gauss_stage(nodes), false, 10000, 1e-2}};
    w.potentials = {Potential::coordinate()};
    w.z = Complex(0.05, 0.05);
    for (auto _ : state) {
        auto t = solve_rpf(w);
        benchmark::DoNotOptimize(t.lambda.data());
    }
}
BENCHMARK(BM_SolveTriplet)->Arg(32)->Arg(64);

void BM_ProjectiveDistances(benchmark::State& state) {
    LogHolderConeParams p;
    auto g = Grid::interval(static_cast<int>(state.range(0)));
    auto fam = logholder_family(p, g);
    std::mt19937_64 rng(1);
    auto f1 = sample_logholder_element(p, g, rng);
    auto f2 = sample_logholder_element(p, g, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hilbert_distance(fam, f1, f2));
        benchmark::DoNotOptimize(delta_distance(fam, f1, f2));
    }
}
BENCHMARK(BM_ProjectiveDistances)->Arg(8)->Arg(16);

void BM_TowerOperatorApply(benchmark::State& state) {
    auto tower = tower_build(geometric_tower_spec(static_cast<int>(state.range(0)), 1));
    TransferStage ts{tower, true, 100, 1e-3};
    StageOperator op(ts, Potential::zero(), 0.0);
    auto f = DiscreteFunction::constant(tower->grid(), 1.0);
    for (auto _ : state) {
        auto out = op.apply(f);
        benchmark::DoNotOptimize(out.values.data());
    }
}
BENCHMARK(BM_TowerOperatorApply)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();

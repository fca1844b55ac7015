#include "rocem/basis.hpp"
#include "rocem/estimators.hpp"
#include "rocem/rng.hpp"
#include "rocem/simharness.hpp"
#include "rocem/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

rocem::Scenario bench_scenario(int n) {
    rocem::Scenario sc;
    sc.n = sc.m = n;
    sc.seed = 42;
    return sc;
}

void BM_BasisEval(benchmark::State& state) {
    const auto basis = rocem::make_basis(50, 4);
    Eigen::VectorXd window;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(basis.eval_nonzero(unif(rng), window));
    }
}
BENCHMARK(BM_BasisEval);

void BM_PenaltyMatrix(benchmark::State& state) {
    const auto basis = rocem::make_basis(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rocem::penalty_matrix(basis));
    }
}
BENCHMARK(BM_PenaltyMatrix)->Arg(20)->Arg(50);

void BM_EmFit(benchmark::State& state) {
    const auto sc = bench_scenario(static_cast<int>(state.range(0)));
    auto rng = rocem::substream(sc.seed, 0);
    const auto sample = rocem::gen_univariate_normal(sc, rng);
    const auto basis = rocem::make_basis(50, 4);
    const auto rates = rocem::bayes_rates(sc.prevalence, sc.se, sc.sp);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rocem::fit_em(sample.data, basis, rates, 1.0));
    }
}
BENCHMARK(BM_EmFit)->Arg(100)->Arg(300)->Arg(500);

void BM_AucExact(benchmark::State& state) {
    const auto sc = bench_scenario(static_cast<int>(state.range(0)));
    auto rng = rocem::substream(sc.seed, 0);
    const auto sample = rocem::gen_univariate_normal(sc, rng);
    const auto basis = rocem::make_basis(50, 4);
    const auto rates = rocem::bayes_rates(sc.prevalence, sc.se, sc.sp);
    const auto fit = rocem::fit_em(sample.data, basis, rates, 1.0);
    const auto cdfs = rocem::estimate_cdfs(fit, sample.data);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rocem::auc(cdfs));
    }
}
BENCHMARK(BM_AucExact)->Arg(500);

} // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "sis/constants.hpp"
#include "sis/localization.hpp"
#include "sis/rng.hpp"
#include "sis/sampling.hpp"
#include "sis/si_space.hpp"

namespace {

sis::GeneratorSet make_hat() {
    return sis::GeneratorSet::create({sis::GeneratorSpec::parse("bspline:2", 1)},
                                     sis::GridSpec{});
}

void BM_SymbolExtrema(benchmark::State& state) {
    sis::GeneratorSet gen = make_hat();
    const sis::AutocorrTable table = gen.autocorr();
    for (auto _ : state) {
        auto ext = sis::symbol_extrema(table, 1, 4096);
        benchmark::DoNotOptimize(ext.min_eig);
    }
}
BENCHMARK(BM_SymbolExtrema);

void BM_LocalizationBuild(benchmark::State& state) {
    sis::GeneratorSet gen = make_hat();
    sis::OrthonormalBasisSet basis = sis::orthonormalize(gen);
    const double R = static_cast<double>(state.range(0));
    for (auto _ : state) {
        sis::LocalizationMatrix loc = sis::build_localization(basis, R);
        benchmark::DoNotOptimize(loc.M.data());
    }
}
BENCHMARK(BM_LocalizationBuild)->Arg(4)->Arg(8)->Arg(16);

void BM_Eigendecompose(benchmark::State& state) {
    sis::GeneratorSet gen = make_hat();
    sis::OrthonormalBasisSet basis = sis::orthonormalize(gen);
    sis::LocalizationMatrix loc =
        sis::build_localization(basis, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        sis::Spectrum spec = sis::eigendecompose(loc);
        benchmark::DoNotOptimize(spec.lambdas.data());
    }
}
BENCHMARK(BM_Eigendecompose)->Arg(8)->Arg(16);

void BM_ExperimentTrial(benchmark::State& state) {
    sis::ExperimentConfig cfg;
    cfg.generators = {sis::GeneratorSpec::parse("bspline:2", 1)};
    cfg.R = 8.0;
    cfg.trials = 0;
    cfg.funcs_per_trial = 5;
    cfg.c2_trials = 40;
    cfg.force = true;
    sis::ExperimentContext ctx(cfg);
    const long s = 500;
    long index = 0;
    for (auto _ : state) {
        sis::TrialResult t = ctx.run_trial(index++, s);
        benchmark::DoNotOptimize(t.lambda_min);
    }
}
BENCHMARK(BM_ExperimentTrial);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <qdecoh/magnus.hpp>
#include <qdecoh/oracles.hpp>
#include <qdecoh/short_time.hpp>

using namespace qdecoh;

namespace {

const BathSpectrum kBath{1e-6, 1.0, 30.0, 0.0};

void BM_BathCorrelation(benchmark::State& state)
{
    const BathSpectrum b{1e-6, 1.0, 30.0, state.range(0) ? 0.5 : 0.0};
    double tau = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bath_correlation(b, tau));
        tau += 1e-3;
    }
}
BENCHMARK(BM_BathCorrelation)->Arg(0)->Arg(1);

void BM_ShortTimeTable(benchmark::State& state)
{
    const CouplingOperator s = CouplingOperator::along(Axis::z);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(short_time_table(s, kBath, t));
}
BENCHMARK(BM_ShortTimeTable)->Arg(1)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_MagnusTimeDomain(benchmark::State& state)
{
    const GateModel m = GateModel::rotating_wave(1.0, static_cast<double>(state.range(1)));
    const CouplingOperator s = CouplingOperator::along(Axis::z);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(magnus_decoherence_table(m, s, kBath, t, {}, MagnusRoute::time_domain));
}
BENCHMARK(BM_MagnusTimeDomain)->Args({1, 1})->Args({6, 1})->Args({1, 15})->Unit(benchmark::kMillisecond);

void BM_FewModeOracle(benchmark::State& state)
{
    DiscreteBath bath;
    bath.modes = {{0.7, 1e-6}, {1.0, 1e-6}, {1.6, 1e-6}};
    bath.fock_cutoff = static_cast<int>(state.range(0));
    const GateModel m = GateModel::rotating_wave(1.0, 1.0);
    const CouplingOperator s = CouplingOperator::along(Axis::z);
    const InitialState rho0 = InitialState::pure(1.1, 0.4);
    FewModeOptions opt;
    opt.check_convergence = false;
    for (auto _ : state) benchmark::DoNotOptimize(few_mode_exact(bath, m, s, rho0, 0.5, opt));
}
BENCHMARK(BM_FewModeOracle)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

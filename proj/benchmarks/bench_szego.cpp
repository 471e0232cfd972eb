// Hot paths: grid synthesis, spectral analysis, the flow kernel, and the
// closed-form Sobolev norms used by the growth sweep.

#include <benchmark/benchmark.h>

#include "szego/aak.hpp"
#include "szego/experiments.hpp"
#include "szego/flow.hpp"
#include "szego/nlft.hpp"
#include "szego/rational_poles.hpp"

namespace {

using namespace szego;

SpectralData witness(int n) {
    std::vector<double> s;
    double cur = 1.0;
    for (int r = 0; r < n; ++r) {
        s.push_back(cur);
        cur *= 0.55;
    }
    std::vector<BlaschkeProduct> psi;
    for (int r = 0; r < n; ++r)
        psi.push_back(r % 3 == 1 ? make_blaschke(0.3 * r, {cd{0.2, 0.1 * r}})
                                 : make_blaschke(0.1 * r, {}));
    return SpectralData{std::move(s), std::move(psi)};
}

void BM_inverse(benchmark::State& state) {
    const SpectralData sd = witness(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(inverse(sd, 1024, 256));
}
BENCHMARK(BM_inverse)->Arg(3)->Arg(5)->Arg(7);

void BM_forward(benchmark::State& state) {
    const SpectralData sd = witness(static_cast<int>(state.range(0)));
    const HardySymbol u = inverse(sd, 1024, 256);
    for (auto _ : state) benchmark::DoNotOptimize(forward(u));
}
BENCHMARK(BM_forward)->Arg(3)->Arg(5);

void BM_szego_rhs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const HardySymbol u = inverse(witness(5), 4 * n, n);
    for (auto _ : state) benchmark::DoNotOptimize(szego_rhs(u));
}
BENCHMARK(BM_szego_rhs)->Arg(64)->Arg(256)->Arg(1024);

void BM_spectral_clusters(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const HardySymbol u = inverse(witness(6), 4 * n, n);
    const HankelPair pair = build_pair(u);
    for (auto _ : state)
        benchmark::DoNotOptimize(spectral_clusters(pair, OperatorSide::H));
}
BENCHMARK(BM_spectral_clusters)->Arg(64)->Arg(128)->Arg(256);

void BM_schmidt_pair(benchmark::State& state) {
    const HardySymbol u = inverse(witness(5), 1024, 256);
    for (auto _ : state) benchmark::DoNotOptimize(schmidt_pair(u, 1));
}
BENCHMARK(BM_schmidt_pair);

void BM_growth_norm(benchmark::State& state) {
    const TurbulenceParams p = make_turbulence_params(
        SpectralData{}, 1e-2, 1e-3, static_cast<int>(state.range(0)));
    const SpectralData sd = turbulence_data(p);
    for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm_exact(sd, 0.75));
}
BENCHMARK(BM_growth_norm)->Arg(2)->Arg(3)->Arg(4);

} // namespace

BENCHMARK_MAIN();

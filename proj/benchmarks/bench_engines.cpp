#include <benchmark/benchmark.h>

#include "vchain/heisenberg_engine.hpp"
#include "vchain/polaron_engine.hpp"

using namespace vchain;

namespace {

DriveSpec detuned_drive() {
    return DriveSpec{0.1, 0.0, -1.0 / hbar_meV_ps};
}

void bm_correlation_tables(benchmark::State& state) {
    BathSpec bath;
    const auto n_tau = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto tables = build_correlation_tables(bath, 20.0, n_tau, 1e-8);
        benchmark::DoNotOptimize(tables.polaron_factor);
    }
}
BENCHMARK(bm_correlation_tables)->Arg(1001)->Arg(10001);

void bm_kernel_precompute(benchmark::State& state) {
    BathSpec bath;
    const auto tables = build_correlation_tables(bath, 20.0, 10001, 1e-8);
    const auto n_sites = static_cast<std::size_t>(state.range(0));
    const SystemModel model =
        n_sites == 1 ? build_single(detuned_drive(), tables.polaron_factor)
                     : build_dexter_single_chain(n_sites, detuned_drive(), 0.1,
                                                 tables.polaron_factor);
    for (auto _ : state) {
        auto cache = precompute_kernel(model, tables);
        benchmark::DoNotOptimize(cache.obar2);
    }
}
BENCHMARK(bm_kernel_precompute)->Arg(1)->Arg(4);

void bm_liouvillian_apply(benchmark::State& state) {
    BathSpec bath;
    const auto tables = build_correlation_tables(bath, 20.0, 10001, 1e-8);
    const auto n_sites = static_cast<std::size_t>(state.range(0));
    const SystemModel model =
        n_sites == 1 ? build_single(detuned_drive(), tables.polaron_factor)
                     : build_dexter_single_chain(n_sites, detuned_drive(), 0.1,
                                                 tables.polaron_factor);
    const KernelCache cache = precompute_kernel(model, tables);
    const Matrix rho = model.initial_state();
    for (auto _ : state) {
        auto d = liouvillian_apply(2.0, rho, cache, model);
        benchmark::DoNotOptimize(d(0, 0));
    }
}
BENCHMARK(bm_liouvillian_apply)->Arg(1)->Arg(4);

void bm_polaron_evolve_100ps(benchmark::State& state) {
    BathSpec bath;
    const auto tables = build_correlation_tables(bath, 20.0, 10001, 1e-8);
    const SystemModel model = build_single(detuned_drive(), tables.polaron_factor);
    const KernelCache cache = precompute_kernel(model, tables);
    EvolveOptions opts;
    opts.dt = 0.01;
    opts.sample_every = 100;
    for (auto _ : state) {
        auto series = evolve(model, cache, model.initial_state(), 100.0, opts);
        benchmark::DoNotOptimize(series.t.back());
    }
}
BENCHMARK(bm_polaron_evolve_100ps);

void bm_heisenberg_rhs(benchmark::State& state) {
    BathSpec bath;
    const auto n_k = static_cast<std::size_t>(state.range(0));
    const KGrid grid = build_kgrid(bath, n_k);
    const SystemModel model = build_single(detuned_drive(), 1.0);
    HeisenbergState s = initial_heisenberg_state(model.initial_state(), n_k);
    for (auto _ : state) {
        auto d = rhs(s, model, grid, HeisenbergOptions{});
        benchmark::DoNotOptimize(d.sigma(0, 0));
    }
}
BENCHMARK(bm_heisenberg_rhs)->Arg(200)->Arg(1000);

} // namespace

BENCHMARK_MAIN();

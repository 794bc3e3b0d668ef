#include <benchmark/benchmark.h>

#include "wasep/dynamics.hpp"
#include "wasep/initial_conditions.hpp"
#include "wasep/observables.hpp"
#include "wasep/suites.hpp"

using namespace wasep;

namespace {

CoupledEnsemble make_ensemble(std::int64_t sites, int replicas) {
    const auto scaling = scaling_constants(0.1);
    WindowSpec window{-1.0, 1.0, (sites - 1) / 2, Topology::reflecting_segment};
    const auto uniforms =
        draw_uniform_field(42, window.n_sites(), window.lattice_extent);
    CoupledEnsemble ensemble(EventStream::for_window(7, scaling, window));
    for (int r = 0; r < replicas; ++r) {
        ensemble.add_replica(
            "r" + std::to_string(r),
            product_measure(
                constant_profile(0.5, window.n_sites(), window.lattice_extent),
                uniforms, window.topology));
    }
    return ensemble;
}

void BM_EventLoop(benchmark::State& state) {
    auto ensemble = make_ensemble(state.range(0), static_cast<int>(state.range(1)));
    const double chunk = 64.0 / static_cast<double>(ensemble.stream().n_bonds());
    std::uint64_t events = 0;
    for (auto _ : state) {
        events += ensemble.evolve(chunk * 1024.0);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(events));
}
BENCHMARK(BM_EventLoop)->Args({10001, 1})->Args({10001, 4})->Args({1001, 6});

void BM_NextEvent(benchmark::State& state) {
    const auto scaling = scaling_constants(0.1);
    EventStream stream(11, scaling, state.range(0), state.range(0) / 2,
                       Topology::reflecting_segment);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stream.next());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NextEvent)->Arg(10001);

void BM_HeightField(benchmark::State& state) {
    auto ensemble = make_ensemble(state.range(0), 1);
    ensemble.evolve(10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ensemble.height(std::size_t{0}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HeightField)->Arg(10001);

void BM_MeanPrediction(benchmark::State& state) {
    const auto scaling = scaling_constants(0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hopf_cole_mean_prediction(scaling, 1.0, 0.5));
    }
}
BENCHMARK(BM_MeanPrediction);

}  // namespace

BENCHMARK_MAIN();

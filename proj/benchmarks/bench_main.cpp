#include <benchmark/benchmark.h>

#include "cshor/circuit_library.hpp"
#include "cshor/numtheory.hpp"
#include "cshor/qsim.hpp"
#include "cshor/synth.hpp"

namespace {

using namespace cshor;

void BM_OrderTable(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(coprime_order_table(n));
    }
}
BENCHMARK(BM_OrderTable)->Arg(21)->Arg(33)->Arg(899);

void BM_SynthesizeFigure(benchmark::State& state) {
    const FigureId id = kAllFigures[static_cast<std::size_t>(state.range(0))];
    const TruthTable table = reference_table(id);
    state.SetLabel(figure_name(id));
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize(table));
    }
}
BENCHMARK(BM_SynthesizeFigure)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

void BM_Qft(benchmark::State& state) {
    const auto m = static_cast<unsigned>(state.range(0));
    const StateVector s = apply_period_map(uniform_input_state(m, 4), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qft_input(s));
    }
}
BENCHMARK(BM_Qft)->DenseRange(4, 14, 2);

void BM_ReduceAndSpectrum(benchmark::State& state) {
    const auto m = static_cast<unsigned>(state.range(0));
    const StateVector s = qft_input(apply_period_map(uniform_input_state(m, 3), 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_to_input(s).spectrum());
    }
}
BENCHMARK(BM_ReduceAndSpectrum)->Arg(3)->Arg(6)->Arg(8);

void BM_OrderFinding(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(order_finding_run(4, n, 500, 1));
    }
}
BENCHMARK(BM_OrderFinding)->Arg(15)->Arg(21)->Arg(33)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

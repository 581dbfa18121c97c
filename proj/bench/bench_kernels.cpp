// Serial edge scan vs the OpenMP kernel on planted 3-colorable graphs.
#include <benchmark/benchmark.h>

#include <vector>

#include "ropm/dynamics.hpp"
#include "ropm/graph_io.hpp"
#include "ropm/kernels.hpp"

namespace {

using ropm::kernels::RhsEvaluator;

void run(benchmark::State& state, RhsEvaluator::Policy policy) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto inst = ropm::gen_planted(n, n * 24 / 10, 3, 7);
    const auto theta = ropm::random_init(n, 3).phases;
    std::vector<double> out(n);
    RhsEvaluator eval(inst.graph, policy);
    const ropm::kernels::RhsTerms terms{0.2, 10.0, 3, 0.0, 1.0};
    for (auto _ : state) {
        eval(theta, terms, out);
        benchmark::DoNotOptimize(out.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * inst.graph.num_edges()));
}

void BM_rhs_serial(benchmark::State& state) { run(state, RhsEvaluator::Policy::serial); }
void BM_rhs_openmp(benchmark::State& state) { run(state, RhsEvaluator::Policy::openmp); }

}  // namespace

BENCHMARK(BM_rhs_serial)->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(BM_rhs_openmp)->RangeMultiplier(8)->Range(64, 1 << 18);

BENCHMARK_MAIN();

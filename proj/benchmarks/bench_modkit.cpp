#include <benchmark/benchmark.h>

#include "modkit/constructions.hpp"
#include "modkit/correspondence.hpp"
#include "modkit/operator_spaces.hpp"
#include "modkit/random.hpp"

using namespace modkit;

namespace {

void BM_Adjointables(benchmark::State& state) {
    const ConcreteModule m = column_module(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(adjointables(m).dim());
}
BENCHMARK(BM_Adjointables)->DenseRange(2, 6, 2);

void BM_Compacts(benchmark::State& state) {
    const ConcreteModule m = column_module(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(compacts(m).algebra_space.dim());
}
BENCHMARK(BM_Compacts)->DenseRange(2, 6, 2);

void BM_BuildRepresentation(benchmark::State& state) {
    Rng rng(static_cast<std::uint64_t>(state.range(0)));
    const Correspondence c = random_correspondence(rng, random_correspondence_blueprint(rng, false, 8));
    for (auto _ : state) benchmark::DoNotOptimize(build_representation(c).pi.size());
}
BENCHMARK(BM_BuildRepresentation)->Arg(1)->Arg(2)->Arg(3);

void BM_InteriorTensor(benchmark::State& state) {
    const Index d = state.range(0);
    const Correspondence x = scalar_correspondence(column_module(d));
    const Correspondence y = scalar_correspondence(column_module(d));
    for (auto _ : state) benchmark::DoNotOptimize(interior_tensor(x, y).quotient_dim());
}
BENCHMARK(BM_InteriorTensor)->DenseRange(2, 4, 1);

void BM_BimoduleCriterion(benchmark::State& state) {
    const Correspondence c = matrix_column_correspondence(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bimodule_criterion(c).is_bimodule);
}
BENCHMARK(BM_BimoduleCriterion)->DenseRange(2, 4, 1);

}  // namespace
BENCHMARK_MAIN();

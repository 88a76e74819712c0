// Serial reference vs OpenMP batch kernels on a random problem the size of
// the wine training split (2558 x 11).

#include <benchmark/benchmark.h>

#include "logens/kernels.hpp"
#include "logens/verify.hpp"

namespace {

const logens::RandomProblem& problem(int n) {
  static std::vector<logens::RandomProblem> cache = [] {
    std::vector<logens::RandomProblem> v;
    for (int layers = 1; layers <= 6; ++layers)
      v.push_back(logens::make_random_problem(layers, 11, 2558, 17 + layers));
    return v;
  }();
  return cache[n - 1];
}

template <auto Kernel>
void gradient(benchmark::State& state) {
  const auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(p.model, p.data));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.data.size()));
}

template <auto Kernel>
void scores(benchmark::State& state) {
  const auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(p.model, p.data.features));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.data.size()));
}

}  // namespace

BENCHMARK(gradient<logens::serial::batch_gradient>)->Name("gradient/serial")->DenseRange(1, 6);
BENCHMARK(gradient<logens::omp::batch_gradient>)->Name("gradient/omp")->DenseRange(1, 6);
BENCHMARK(gradient<logens::serial::batch_cost>)->Name("cost/serial")->DenseRange(1, 6);
BENCHMARK(gradient<logens::omp::batch_cost>)->Name("cost/omp")->DenseRange(1, 6);
BENCHMARK(scores<logens::serial::class1_scores>)->Name("scores/serial")->DenseRange(1, 6);
BENCHMARK(scores<logens::omp::class1_scores>)->Name("scores/omp")->DenseRange(1, 6);

BENCHMARK_MAIN();

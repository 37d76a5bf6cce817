#include <benchmark/benchmark.h>

#include "sigsearch/generators.hpp"
#include "sigsearch/oracle.hpp"
#include "sigsearch/simulator.hpp"
#include "sigsearch/solver.hpp"

using namespace sigsearch;

namespace {

RootedTree example_tree() {
  const EdgeSpec edges[] = {{"O", "A", 1, false}, {"A", "L1", 2, false}, {"A", "L2", 3, false}, {"O", "R", 4, false}};
  return RootedTree::build("O", edges);
}

void BM_SolveExample(benchmark::State& state) {
  const auto t = example_tree();
  const SignalAccuracy acc(2.0 / 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve(t, acc).value);
}
BENCHMARK(BM_SolveExample);

void BM_SolvePerfect(benchmark::State& state) {
  const auto t = perfect_binary_tree(static_cast<int>(state.range(0)));
  const SignalAccuracy acc(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(solve(t, acc).value);
  state.SetComplexityN(static_cast<int64_t>(t.node_count()));
}
BENCHMARK(BM_SolvePerfect)->DenseRange(4, 16, 4)->Complexity(benchmark::oN);

void BM_CrossValidate(benchmark::State& state) {
  const auto t = perfect_binary_tree(static_cast<int>(state.range(0)));
  const SignalAccuracy acc(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(cross_validate(t, acc).pass);
}
BENCHMARK(BM_CrossValidate)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto t = example_tree();
  const SignalAccuracy acc(2.0 / 3.0);
  const auto s = solve(t, acc);
  const auto policy = s.policy(t);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_value(t, policy, s.lambda_bar, acc, n, 1).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

#include "dynstore/cut_engine.hpp"
#include "dynstore/flow_graph.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace dynstore;

namespace {

Permutation random_permutation(int n, std::mt19937_64& rng) {
  std::vector<NodeId> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  return Permutation(std::move(order));
}

void BM_PolicyMinCut(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_a();
  const WeightRule star = WeightRule::star();
  std::mt19937_64 rng(1);
  std::vector<Permutation> perms;
  for (int i = 0; i < 64; ++i) perms.push_back(random_permutation(20, rng));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(policy_min_cut_value(cfg, star, perms[i++ & 63]));
  }
}
BENCHMARK(BM_PolicyMinCut);

void BM_CutValueAccumulation(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_a();
  const WeightRule star = WeightRule::star();
  const Permutation id = Permutation::identity(20);
  std::vector<NodeId> selection;
  for (NodeId v = 1; v <= 13; ++v) selection.push_back(v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cut_value(cfg, star, id, selection));
  }
}
BENCHMARK(BM_CutValueAccumulation);

void BM_ExhaustiveMinCutSmall(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  const Permutation pi({3, 4, 5, 1, 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_cut(cfg, star, pi, SelectionMode::Exhaustive).value);
  }
}
BENCHMARK(BM_ExhaustiveMinCutSmall);

void BM_AverageMinCutExact(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_a(); // C(20,10) = 184756 classes
  const WeightRule star = WeightRule::star();
  for (auto _ : state) {
    benchmark::DoNotOptimize(average_min_cut_exact(cfg, star));
  }
}
BENCHMARK(BM_AverageMinCutExact);

void BM_OracleCut(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  const std::vector<NodeId> failures = {1, 2, 3, 4, 5, 2, 4};
  const std::vector<NodeId> selection = {1, 2, 4, 5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_cut(cfg, star, failures, selection));
  }
}
BENCHMARK(BM_OracleCut);

void BM_OracleCutLarge(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_a();
  const WeightRule star = WeightRule::star();
  std::vector<NodeId> failures, selection;
  for (NodeId v = 1; v <= 20; ++v) failures.push_back(v);
  for (NodeId v = 1; v <= 13; ++v) selection.push_back(v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_cut(cfg, star, failures, selection));
  }
}
BENCHMARK(BM_OracleCutLarge);

} // namespace

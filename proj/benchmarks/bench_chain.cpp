#include "dynstore/chain.hpp"
#include "dynstore/sim.hpp"

#include <benchmark/benchmark.h>

using namespace dynstore;

namespace {

void BM_TransitionStepD(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  NetworkConfig cfg;
  cfg.n1 = 1;
  cfg.n2 = n - 1;
  cfg.beta1 = cfg.beta2 = 1;
  cfg.k_prime = 2;
  auto dist = uniform_chain_distribution<double>(n);
  for (auto _ : state) {
    dist = transition_step(dist, cfg);
    benchmark::DoNotOptimize(dist.probs.data());
  }
}
BENCHMARK(BM_TransitionStepD)->Arg(5)->Arg(6)->Arg(7);

void BM_MixingCheck(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mixing_check(5, 2).certified);
  }
}
BENCHMARK(BM_MixingCheck);

void BM_SampleFailures(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_c();
  FailureSampler sampler(cfg, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.next());
  }
}
BENCHMARK(BM_SampleFailures);

void BM_DiscreteTrajectory(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_discrete(cfg, star, state.range(0), 7).running_avg_cut);
  }
}
BENCHMARK(BM_DiscreteTrajectory)->Arg(1000)->Arg(10000);

void BM_StationaryBlocks(benchmark::State& state) {
  const NetworkConfig cfg = preset_cfg_c();
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_blocks(cfg).block_probs.size());
  }
}
BENCHMARK(BM_StationaryBlocks);

} // namespace

BENCHMARK_MAIN();

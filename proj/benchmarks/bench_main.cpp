#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "graphfuse/experiments.hpp"
#include "graphfuse/graph.hpp"
#include "graphfuse/laplace.hpp"
#include "graphfuse/tfusion.hpp"
#include "graphfuse/tv.hpp"

using namespace graphfuse;

namespace {

ChainData noisy_chain(std::size_t n) {
  const SignalSpec spec = gen_chain_signal(ChainDesign::even, n);
  return {add_noise(spec, 0.3, 1), identity_chain(n), default_hyperparams(n)};
}

// One full Gibbs cycle (scales, noise variance, signal) on an n-node chain.
void BM_TFusionSweep(benchmark::State& state) {
  const ChainData data = noisy_chain(static_cast<std::size_t>(state.range(0)));
  FusionState s = init_state(data);
  Rng rng(7);
  for (auto _ : state) {
    update_lambdas(s, data, rng);
    update_sigma2(s, data, rng);
    update_thetas(s, data, rng);
    benchmark::DoNotOptimize(s.theta.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TFusionSweep)->Arg(100)->Arg(400)->Arg(1600)->Arg(6400);

void BM_LaplaceSweep(benchmark::State& state) {
  const ChainData data = noisy_chain(static_cast<std::size_t>(state.range(0)));
  FusionState s = init_laplace_state(data);
  Rng rng(7);
  for (auto _ : state) {
    update_laplace_scales(s, data, rng);
    update_sigma2(s, data, rng);
    update_thetas(s, data, rng);
    benchmark::DoNotOptimize(s.theta.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LaplaceSweep)->Arg(100)->Arg(400)->Arg(1600)->Arg(6400);

void BM_FusedLasso(benchmark::State& state) {
  const ChainData data = noisy_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto fit = tv_denoise_1d(data.y, 0.5);
    benchmark::DoNotOptimize(fit.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FusedLasso)->Arg(100)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_DfsChain(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_lattice(side, side);
  for (auto _ : state) {
    const ChainOrder chain = dfs_chain(g, 0);
    benchmark::DoNotOptimize(chain.order.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_DfsChain)->RangeMultiplier(4)->Range(16, 256);

}  // namespace

BENCHMARK_MAIN();

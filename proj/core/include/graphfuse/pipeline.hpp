#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphfuse/distributions.hpp"
#include "graphfuse/graph.hpp"
#include "graphfuse/io.hpp"
#include "graphfuse/method.hpp"
#include "graphfuse/tfusion.hpp"

namespace graphfuse {

// True when the edges are exactly (i, i + 1) for i < n - 1.
bool is_native_chain(const Graph& graph);

struct DenoiseOptions {
  Method method = Method::t_fusion;
  SamplerConfig sampler;           // sampler.seed is the run seed
  std::size_t roots = 3;           // random DFS roots when `root_list` is empty
  std::vector<NodeId> root_list;   // explicit roots
  std::optional<Hyperparams> hyper;
  std::optional<double> tv_lambda;  // fused-lasso penalty; cross-validated when absent
  std::size_t cv_folds = 5;
  double level = 0.95;
  std::size_t workers = 1;  // 0 = worker_count()
};

// The chains a run uses: the native order for path graphs, else one DFS
// chain per root (random roots from split_seed(seed, 1)).
std::vector<ChainOrder> denoise_chains(const Graph& graph, const DenoiseOptions& options);

// Full pipeline on one signal. Bayesian methods pool all chains, summarize,
// and sparsify the pooled mean along the first chain; the fused lasso solves
// on the first chain and reports its exact blocks. Change-point labels name
// the first node of each new block, taken from `labels` when given.
DenoiseReport denoise(std::span<const double> y, const Graph& graph, const DenoiseOptions& options,
                      std::span<const std::string> labels = {});

}  // namespace graphfuse

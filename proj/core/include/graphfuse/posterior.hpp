#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphfuse/graph.hpp"
#include "graphfuse/method.hpp"
#include "graphfuse/tfusion.hpp"

namespace graphfuse {

struct PosteriorSummary {
  std::vector<double> theta_mean;
  std::vector<double> band_lo;
  std::vector<double> band_hi;
  double sigma_hat = 0.0;  // posterior mean of sigma (sqrt taken per draw)
  double level = 0.95;

  friend bool operator==(const PosteriorSummary&, const PosteriorSummary&) = default;
};

// Componentwise means and empirical (1 -/+ level)/2 quantiles (linear
// interpolation between order statistics).
PosteriorSummary summarize(const PosteriorSamples& samples, double level = 0.95);

struct BlockPartition {
  std::vector<std::size_t> labels;      // node -> block id, increasing along the chain
  std::vector<std::size_t> boundaries;  // chain positions t with a break between order[t] and order[t+1]

  std::size_t num_blocks() const;

  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;
};

// m * Q_t(1 - 1/(2n); 2 a_t).
double sparsify_threshold(const Hyperparams& hyper, std::size_t n);

// Fuses chain-adjacent nodes whose |estimate_i - estimate_j| / scale <= threshold.
BlockPartition partition_by_threshold(std::span<const double> estimate, double scale,
                                      double threshold, const ChainOrder& chain);

// Posterior-mean sparsification along the chain at sparsify_threshold(hyper, n).
// Throws std::invalid_argument if summary.sigma_hat <= 0.
BlockPartition sparsify(const PosteriorSummary& summary, const Hyperparams& hyper, std::size_t n,
                        const ChainOrder& chain);

// Chain positions t where the partition breaks between order[t] and order[t+1].
std::vector<std::size_t> change_points(const BlockPartition& partition, const ChainOrder& chain);

PosteriorSamples run_sampler(const ChainData& data, const SamplerConfig& config, Method method);

// k distinct roots drawn uniformly without replacement.
std::vector<NodeId> random_roots(std::size_t n, std::size_t k, std::uint64_t seed);

// Runs one DFS chain + sampler per root and concatenates the draws. The first
// root uses config.seed; root i > 0 uses split_seed(config.seed, i). Chains
// run on up to `workers` threads (0 = worker_count()); draws are
// concatenated in root order either way.
PosteriorSamples pool_roots(std::span<const double> y, const Graph& graph,
                            std::span<const NodeId> roots, const Hyperparams& hyper,
                            const SamplerConfig& config, Method method = Method::t_fusion,
                            std::size_t workers = 1);

// Draws of the index-th chain of a pooled sample, located through its metadata.
PosteriorSamples chain_samples(const PosteriorSamples& pooled, std::size_t index);

}  // namespace graphfuse

#include "graphfuse/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "graphfuse/distributions.hpp"
#include "graphfuse/laplace.hpp"
#include "graphfuse/parallel.hpp"
#include "graphfuse/random.hpp"

namespace graphfuse {

namespace {

// Sorted sample quantile, linear interpolation between order statistics.
double sorted_quantile(std::span<const double> sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

PosteriorSummary summarize(const PosteriorSamples& samples, double level) {
  if (samples.rows() == 0 || samples.n == 0) throw std::invalid_argument("summarize: no draws");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("summarize: level must be in (0,1)");

  const std::size_t rows = samples.rows();
  const std::size_t n = samples.n;
  PosteriorSummary s;
  s.level = level;
  s.theta_mean.assign(n, 0.0);
  s.band_lo.resize(n);
  s.band_hi.resize(n);

  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = samples.row(r);
    for (std::size_t i = 0; i < n; ++i) s.theta_mean[i] += row[i];
  }
  for (double& v : s.theta_mean) v /= static_cast<double>(rows);

  const double p_lo = 0.5 * (1.0 - level);
  const double p_hi = 0.5 * (1.0 + level);
  std::vector<double> column(rows);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < rows; ++r) column[r] = samples.draws[r * n + i];
    std::sort(column.begin(), column.end());
    // Clamp so floating-point rounding in the mean never escapes the band.
    s.band_lo[i] = std::min(sorted_quantile(column, p_lo), s.theta_mean[i]);
    s.band_hi[i] = std::max(sorted_quantile(column, p_hi), s.theta_mean[i]);
  }

  double sigma_sum = 0.0;
  for (double s2 : samples.sigma2_draws) sigma_sum += std::sqrt(s2);
  s.sigma_hat = sigma_sum / static_cast<double>(rows);
  return s;
}

std::size_t BlockPartition::num_blocks() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

double sparsify_threshold(const Hyperparams& hyper, std::size_t n) {
  if (n < 1) throw std::invalid_argument("sparsify_threshold: n must be positive");
  const double dn = static_cast<double>(n);
  return hyper.m * student_t_quantile(1.0 - 1.0 / (2.0 * dn), 2.0 * hyper.a_t);
}

BlockPartition partition_by_threshold(std::span<const double> estimate, double scale,
                                      double threshold, const ChainOrder& chain) {
  if (!(scale > 0.0)) throw std::invalid_argument("sparsify: scale estimate must be positive");
  if (estimate.size() != chain.size()) throw std::invalid_argument("sparsify: length mismatch");
  BlockPartition p;
  p.labels.assign(estimate.size(), 0);
  std::size_t label = 0;
  for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
    const double gap = std::abs(estimate[chain.order[t]] - estimate[chain.order[t + 1]]) / scale;
    if (!(gap <= threshold)) {
      ++label;
      p.boundaries.push_back(t);
    }
    p.labels[chain.order[t + 1]] = label;
  }
  return p;
}

BlockPartition sparsify(const PosteriorSummary& summary, const Hyperparams& hyper, std::size_t n,
                        const ChainOrder& chain) {
  if (!(summary.sigma_hat > 0.0)) throw std::invalid_argument("sparsify: sigma_hat must be positive");
  return partition_by_threshold(summary.theta_mean, summary.sigma_hat, sparsify_threshold(hyper, n),
                                chain);
}

std::vector<std::size_t> change_points(const BlockPartition& partition, const ChainOrder& chain) {
  if (partition.labels.size() != chain.size()) {
    throw std::invalid_argument("change_points: partition does not match chain");
  }
  std::vector<std::size_t> points;
  for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
    if (partition.labels[chain.order[t]] != partition.labels[chain.order[t + 1]]) points.push_back(t);
  }
  return points;
}

PosteriorSamples run_sampler(const ChainData& data, const SamplerConfig& config, Method method) {
  switch (method) {
    case Method::t_fusion: return run_gibbs(data, config);
    case Method::laplace: return run_laplace_gibbs(data, config);
    case Method::l1: break;
  }
  throw std::invalid_argument("run_sampler: l1 fusion has no posterior sampler");
}

std::vector<NodeId> random_roots(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > n) throw std::invalid_argument("random_roots: need 1 <= k <= n");
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(nodes[i], nodes[pick(rng)]);
  }
  nodes.resize(k);
  return nodes;
}

PosteriorSamples pool_roots(std::span<const double> y, const Graph& graph,
                            std::span<const NodeId> roots, const Hyperparams& hyper,
                            const SamplerConfig& config, Method method, std::size_t workers) {
  if (roots.empty()) throw std::invalid_argument("pool_roots: no roots given");
  if (y.size() != graph.num_nodes()) throw std::invalid_argument("pool_roots: signal length mismatch");
  for (NodeId r : roots) {
    if (r >= graph.num_nodes()) {
      throw std::invalid_argument("pool_roots: root " + std::to_string(r) + " is not a node");
    }
  }

  std::vector<PosteriorSamples> parts(roots.size());
  parallel_for(
      roots.size(),
      [&](std::size_t i) {
        ChainData data{std::vector<double>(y.begin(), y.end()), dfs_chain(graph, roots[i]), hyper};
        SamplerConfig cfg = config;
        cfg.seed = i == 0 ? config.seed : split_seed(config.seed, i);
        parts[i] = run_sampler(data, cfg, method);
      },
      workers == 0 ? worker_count() : workers);

  PosteriorSamples pooled;
  pooled.n = y.size();
  for (const PosteriorSamples& part : parts) {
    pooled.draws.insert(pooled.draws.end(), part.draws.begin(), part.draws.end());
    pooled.sigma2_draws.insert(pooled.sigma2_draws.end(), part.sigma2_draws.begin(),
                               part.sigma2_draws.end());
    pooled.meta.insert(pooled.meta.end(), part.meta.begin(), part.meta.end());
  }
  return pooled;
}

PosteriorSamples chain_samples(const PosteriorSamples& pooled, std::size_t index) {
  if (index >= pooled.meta.size()) throw std::out_of_range("chain_samples: no such chain");
  auto kept = [](const SampleMeta& m) { return (m.iterations - m.burn_in + m.thin - 1) / m.thin; };
  std::size_t first = 0;
  for (std::size_t i = 0; i < index; ++i) first += kept(pooled.meta[i]);
  const std::size_t count = kept(pooled.meta[index]);
  if (first + count > pooled.rows()) throw std::invalid_argument("chain_samples: metadata exceeds draws");

  PosteriorSamples out;
  out.n = pooled.n;
  const auto at = [&](std::size_t r) { return pooled.draws.begin() + static_cast<std::ptrdiff_t>(r * pooled.n); };
  out.draws.assign(at(first), at(first + count));
  out.sigma2_draws.assign(pooled.sigma2_draws.begin() + static_cast<std::ptrdiff_t>(first),
                          pooled.sigma2_draws.begin() + static_cast<std::ptrdiff_t>(first + count));
  out.meta.push_back(pooled.meta[index]);
  return out;
}

}  // namespace graphfuse

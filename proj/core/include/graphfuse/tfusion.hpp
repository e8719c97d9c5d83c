#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphfuse/distributions.hpp"
#include "graphfuse/graph.hpp"
#include "graphfuse/random.hpp"

namespace graphfuse {

// Observations in original node order plus the chain the prior lives on.
struct ChainData {
  std::vector<double> y;
  ChainOrder chain;
  Hyperparams hyper;

  std::size_t size() const noexcept { return y.size(); }
  // Throws std::invalid_argument on length mismatch, non-finite y or bad hyperparameters.
  void validate() const;
};

// Gibbs state. `lambda[k - 1]` is the variance multiplier of chain edge k
// (inverse-gamma scale for the t prior, exponential scale for Laplace).
struct FusionState {
  std::vector<double> theta;  // original node order
  std::vector<double> lambda;
  double sigma2 = 1.0;
};

struct SamplerConfig {
  std::size_t iterations = 6000;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t kept() const noexcept { return (iterations - burn_in + thin - 1) / thin; }
};

struct SampleMeta {
  std::uint64_t seed = 0;
  NodeId root = 0;
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 1;

  friend bool operator==(const SampleMeta&, const SampleMeta&) = default;
};

// Retained draws; theta rows are stored row-major in original node order.
struct PosteriorSamples {
  std::size_t n = 0;
  std::vector<double> draws;
  std::vector<double> sigma2_draws;
  std::vector<SampleMeta> meta;  // one entry per contributing chain

  std::size_t rows() const noexcept { return sigma2_draws.size(); }
  std::span<const double> row(std::size_t r) const { return {draws.data() + r * n, n}; }
  void append(std::span<const double> theta, double sigma2);

  friend bool operator==(const PosteriorSamples&, const PosteriorSamples&) = default;
};

struct GaussianConditional {
  double mean = 0.0;
  double variance = 1.0;
};

constexpr double kVarianceFloor = 1e-12;

// Difference-based noise variance: (median |y_{t+1} - y_t| along the chain
// / (0.6745 sqrt 2))^2, floored at 1e-8; 1 for a single node.
double initial_noise_variance(const ChainData& data);

// theta = y, sigma2 = initial_noise_variance, lambda_k = b_t / (a_t + 1/2).
FusionState init_state(const ChainData& data);

// lambda_k | . ~ IG(a_t + 1/2, b_t + (theta_i - theta_j)^2 / (2 sigma2)).
void update_lambdas(FusionState& state, const ChainData& data, Rng& rng);

// Rate of the sigma2 full conditional:
// b_sigma + theta_r^2 / (2 lambda0) + |y - theta|^2 / 2 + sum_k d_k^2 / (2 lambda_k).
double sigma2_conditional_rate(const FusionState& state, const ChainData& data);
// Shape of the sigma2 full conditional, a_sigma + n.
double sigma2_conditional_shape(const ChainData& data);
void update_sigma2(FusionState& state, const ChainData& data, Rng& rng);

// Full conditional of the node at chain position t given all other values.
GaussianConditional theta_conditional(const FusionState& state, const ChainData& data,
                                      std::size_t position);
// One systematic sweep in chain-position order (root first).
void update_thetas(FusionState& state, const ChainData& data, Rng& rng);

// Repeats (lambdas, sigma2, thetas) and keeps post-burn-in draws every `thin`
// iterations. Deterministic given config.seed.
PosteriorSamples run_gibbs(const ChainData& data, const SamplerConfig& config);

}  // namespace graphfuse

#include "graphfuse/tfusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace graphfuse {

void ChainData::validate() const {
  if (y.empty()) throw std::invalid_argument("signal is empty");
  if (chain.size() != y.size()) {
    throw std::invalid_argument("chain covers " + std::to_string(chain.size()) +
                                " nodes but signal has " + std::to_string(y.size()));
  }
  if (chain.chain_edges.size() + 1 != y.size() || chain.position.size() != y.size()) {
    throw std::invalid_argument("malformed chain order");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("signal contains non-finite values");
  }
  hyper.validate();
}

void SamplerConfig::validate() const {
  if (iterations <= burn_in) throw std::invalid_argument("iterations must exceed burn-in");
  if (thin == 0) throw std::invalid_argument("thin must be at least 1");
}

void PosteriorSamples::append(std::span<const double> theta, double sigma2) {
  if (theta.size() != n) throw std::invalid_argument("draw length does not match sample width");
  draws.insert(draws.end(), theta.begin(), theta.end());
  sigma2_draws.push_back(sigma2);
}

double initial_noise_variance(const ChainData& data) {
  const auto& order = data.chain.order;
  if (order.size() < 2) return 1.0;
  // Median absolute successive difference along the chain, rescaled to a
  // Gaussian standard deviation; insensitive to the jumps of a blocky signal.
  std::vector<double> diffs(order.size() - 1);
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    diffs[t] = std::abs(data.y[order[t + 1]] - data.y[order[t]]);
  }
  const auto mid = diffs.begin() + static_cast<std::ptrdiff_t>(diffs.size() / 2);
  std::nth_element(diffs.begin(), mid, diffs.end());
  double median = *mid;
  if (diffs.size() % 2 == 0) median = 0.5 * (median + *std::max_element(diffs.begin(), mid));
  const double sd = median / (0.6744897501960817 * std::numbers::sqrt2);
  return std::max(sd * sd, 1e-8);
}

FusionState init_state(const ChainData& data) {
  FusionState state;
  state.theta = data.y;
  state.sigma2 = initial_noise_variance(data);
  state.lambda.assign(data.size() - 1, data.hyper.b_t / (data.hyper.a_t + 0.5));
  return state;
}

void update_lambdas(FusionState& state, const ChainData& data, Rng& rng) {
  const double shape = data.hyper.a_t + 0.5;
  const double inv_two_sigma2 = 0.5 / std::max(state.sigma2, kVarianceFloor);
  for (const ChainEdge& e : data.chain.chain_edges) {
    const double d = state.theta[e.from] - state.theta[e.to];
    state.lambda[e.index - 1] = sample_inverse_gamma(shape, data.hyper.b_t + d * d * inv_two_sigma2, rng);
  }
}

double sigma2_conditional_shape(const ChainData& data) {
  return data.hyper.a_sigma + static_cast<double>(data.size());
}

double sigma2_conditional_rate(const FusionState& state, const ChainData& data) {
  const auto& chain = data.chain;
  const double root = state.theta[chain.root];
  double rate = data.hyper.b_sigma + root * root / (2.0 * data.hyper.lambda0);
  // Walk the chain once: residual at each position, difference on each link.
  for (std::size_t t = 0; t < chain.size(); ++t) {
    const NodeId v = chain.order[t];
    const double r = data.y[v] - state.theta[v];
    rate += 0.5 * r * r;
    if (t + 1 < chain.size()) {
      const double d = state.theta[v] - state.theta[chain.order[t + 1]];
      rate += 0.5 * d * d / std::max(state.lambda[t], kVarianceFloor);
    }
  }
  return rate;
}

void update_sigma2(FusionState& state, const ChainData& data, Rng& rng) {
  state.sigma2 = sample_inverse_gamma(sigma2_conditional_shape(data),
                                      sigma2_conditional_rate(state, data), rng);
}

GaussianConditional theta_conditional(const FusionState& state, const ChainData& data,
                                      std::size_t position) {
  const auto& order = data.chain.order;
  const NodeId v = order[position];
  // Work in units of 1/sigma2; it factors out of the mean.
  double precision = 1.0;
  double weighted = data.y[v];
  if (position == 0) precision += 1.0 / data.hyper.lambda0;
  if (position > 0) {
    const double w = 1.0 / std::max(state.lambda[position - 1], kVarianceFloor);
    precision += w;
    weighted += w * state.theta[order[position - 1]];
  }
  if (position + 1 < order.size()) {
    const double w = 1.0 / std::max(state.lambda[position], kVarianceFloor);
    precision += w;
    weighted += w * state.theta[order[position + 1]];
  }
  return {weighted / precision, std::max(state.sigma2 / precision, kVarianceFloor)};
}

void update_thetas(FusionState& state, const ChainData& data, Rng& rng) {
  for (std::size_t t = 0; t < data.chain.size(); ++t) {
    const auto cond = theta_conditional(state, data, t);
    state.theta[data.chain.order[t]] = sample_normal(cond.mean, cond.variance, rng);
  }
}

PosteriorSamples run_gibbs(const ChainData& data, const SamplerConfig& config) {
  data.validate();
  config.validate();
  Rng rng(config.seed);
  FusionState state = init_state(data);

  PosteriorSamples samples;
  samples.n = data.size();
  samples.draws.reserve(config.kept() * samples.n);
  samples.sigma2_draws.reserve(config.kept());
  samples.meta.push_back({config.seed, data.chain.root, config.iterations, config.burn_in, config.thin});

  for (std::size_t it = 0; it < config.iterations; ++it) {
    update_lambdas(state, data, rng);
    update_sigma2(state, data, rng);
    update_thetas(state, data, rng);
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0) {
      samples.append(state.theta, state.sigma2);
    }
  }
  return samples;
}

}  // namespace graphfuse

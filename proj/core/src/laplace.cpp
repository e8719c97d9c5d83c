#include "graphfuse/laplace.hpp"

#include <algorithm>
#include <cmath>

namespace graphfuse {

FusionState init_laplace_state(const ChainData& data) {
  FusionState state = init_state(data);
  const double rate = data.hyper.laplace_rate;
  std::fill(state.lambda.begin(), state.lambda.end(), 2.0 / (rate * rate));
  return state;
}

void update_laplace_scales(FusionState& state, const ChainData& data, Rng& rng) {
  const double rate2 = data.hyper.laplace_rate * data.hyper.laplace_rate;
  const double sigma = std::sqrt(std::max(state.sigma2, kVarianceFloor));
  for (const ChainEdge& e : data.chain.chain_edges) {
    const double gap = std::abs(state.theta[e.from] - state.theta[e.to]);
    const double mean = gap < kLaplaceGapFloor
                            ? kLaplaceMeanCap
                            : std::min(data.hyper.laplace_rate * sigma / gap, kLaplaceMeanCap);
    state.lambda[e.index - 1] = 1.0 / sample_inverse_gaussian(mean, rate2, rng);
  }
}

PosteriorSamples run_laplace_gibbs(const ChainData& data, const SamplerConfig& config) {
  data.validate();
  config.validate();
  Rng rng(config.seed);
  FusionState state = init_laplace_state(data);

  PosteriorSamples samples;
  samples.n = data.size();
  samples.draws.reserve(config.kept() * samples.n);
  samples.sigma2_draws.reserve(config.kept());
  samples.meta.push_back({config.seed, data.chain.root, config.iterations, config.burn_in, config.thin});

  for (std::size_t it = 0; it < config.iterations; ++it) {
    update_laplace_scales(state, data, rng);
    update_sigma2(state, data, rng);
    update_thetas(state, data, rng);
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0) {
      samples.append(state.theta, state.sigma2);
    }
  }
  return samples;
}

}  // namespace graphfuse

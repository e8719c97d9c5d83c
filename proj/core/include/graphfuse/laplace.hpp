#pragma once

#include "graphfuse/tfusion.hpp"

namespace graphfuse {

// Bayesian fused-lasso comparator. Differences along chain edges are
// N(0, tau_k sigma2) with tau_k ~ Exponential(rate = lambda^2 / 2), so each
// difference is marginally Laplace with rate lambda / sigma. `state.lambda`
// holds the tau_k.

// Below this gap the inverse-Gaussian mean is capped at kLaplaceMeanCap.
constexpr double kLaplaceGapFloor = 1e-10;
constexpr double kLaplaceMeanCap = 1e10;

// tau_k = 2 / lambda^2 (prior mean); theta and sigma2 as init_state.
FusionState init_laplace_state(const ChainData& data);

// 1 / tau_k | . ~ InverseGaussian(mean = sqrt(lambda^2 sigma2 / d_k^2), shape = lambda^2).
void update_laplace_scales(FusionState& state, const ChainData& data, Rng& rng);

PosteriorSamples run_laplace_gibbs(const ChainData& data, const SamplerConfig& config);

}  // namespace graphfuse

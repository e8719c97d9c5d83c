#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphfuse/graph.hpp"

namespace graphfuse {

struct TvSolution {
  std::vector<double> theta_hat;  // original node order
  double lambda_used = 0.0;
  double objective = 0.0;
};

// Exact minimizer of 1/2 |y - x|^2 + lambda * sum_t |x_{t+1} - x_t| over a
// sequence, O(n) in practice (Condat's direct algorithm).
std::vector<double> tv_denoise_1d(std::span<const double> y, double lambda);

// 1/2 |y - theta|^2 + lambda * TV(theta over chain links); both vectors in node order.
double fused_lasso_objective(std::span<const double> y, std::span<const double> theta,
                             const ChainOrder& chain, double lambda);

// Fused lasso along the chain, returned in original node order.
TvSolution tv_denoise_chain(std::span<const double> y, const ChainOrder& chain, double lambda);

// 30 log-spaced values in [1e-3, n * range(y)].
std::vector<double> default_lambda_grid(std::span<const double> y);

struct CvResult {
  double lambda = 0.0;
  std::vector<double> errors;  // mean squared prediction error per grid value
};

// K-fold cross-validation over chain positions. Held-out nodes are predicted
// by averaging the fitted values of their nearest retained chain neighbors.
// Ties go to the smallest lambda.
CvResult cross_validate_lambda(std::span<const double> y, const ChainOrder& chain,
                               std::span<const double> grid, std::size_t folds,
                               std::uint64_t seed);

double choose_lambda_cv(std::span<const double> y, const ChainOrder& chain,
                        std::span<const double> grid, std::size_t folds, std::uint64_t seed);

}  // namespace graphfuse

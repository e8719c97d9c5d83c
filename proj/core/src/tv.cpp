#include "graphfuse/tv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "graphfuse/random.hpp"

namespace graphfuse {

namespace {

void check_finite(std::span<const double> y) {
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("fused lasso: non-finite input");
  }
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("fused lasso: lambda must be finite and nonnegative");
  }
}

}  // namespace

std::vector<double> tv_denoise_1d(std::span<const double> y, double lambda) {
  check_lambda(lambda);
  check_finite(y);
  const std::size_t n = y.size();
  std::vector<double> x(y.begin(), y.end());
  if (n < 2 || lambda == 0.0) return x;

  // Tube bounds [vmin, vmax] for the current segment starting at k0, with
  // running dual slacks umin/umax; kminus/kplus mark the last positions where
  // the lower/upper bound was last pinned.
  std::size_t k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = y[0] - lambda, vmax = y[0] + lambda;
  const double two_lambda = 2.0 * lambda;

  auto fill = [&](double value, std::size_t last) {
    do {
      x[k0++] = value;
    } while (k0 <= last);
  };

  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        fill(vmin, kminus);
        k = kminus = k0;
        vmin = y[k0];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        fill(vmax, kplus);
        k = kplus = k0;
        vmax = y[k0];
        umax = -lambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        fill(vmin, k);
        return x;
      }
    }
    umin += y[k + 1] - vmin;
    if (umin < -lambda) {
      fill(vmin, kminus);
      k = kminus = kplus = k0;
      vmin = y[k0];
      vmax = vmin + two_lambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    umax += y[k + 1] - vmax;
    if (umax > lambda) {
      fill(vmax, kplus);
      k = kminus = kplus = k0;
      vmax = y[k0];
      vmin = vmax - two_lambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    ++k;
    if (umin >= lambda) {
      kminus = k;
      vmin += (umin - lambda) / static_cast<double>(kminus - k0 + 1);
      umin = lambda;
    }
    if (umax <= -lambda) {
      kplus = k;
      vmax += (umax + lambda) / static_cast<double>(kplus - k0 + 1);
      umax = -lambda;
    }
  }
}

double fused_lasso_objective(std::span<const double> y, std::span<const double> theta,
                             const ChainOrder& chain, double lambda) {
  if (y.size() != theta.size() || y.size() != chain.size()) {
    throw std::invalid_argument("fused_lasso_objective: length mismatch");
  }
  double fit = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) fit += (y[i] - theta[i]) * (y[i] - theta[i]);
  return 0.5 * fit + lambda * total_variation(theta, std::span<const ChainEdge>(chain.chain_edges));
}

TvSolution tv_denoise_chain(std::span<const double> y, const ChainOrder& chain, double lambda) {
  if (y.size() != chain.size()) throw std::invalid_argument("tv_denoise_chain: length mismatch");
  std::vector<double> along(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) along[t] = y[chain.order[t]];
  const auto fitted = tv_denoise_1d(along, lambda);

  TvSolution sol;
  sol.theta_hat.resize(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) sol.theta_hat[chain.order[t]] = fitted[t];
  sol.lambda_used = lambda;
  sol.objective = fused_lasso_objective(y, sol.theta_hat, chain, lambda);
  return sol;
}

std::vector<double> default_lambda_grid(std::span<const double> y) {
  constexpr std::size_t kCount = 30;
  constexpr double kLow = 1e-3;
  double range = 0.0;
  if (!y.empty()) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    range = *hi - *lo;
  }
  const double high = std::max(static_cast<double>(y.size()) * range, 10.0 * kLow);
  std::vector<double> grid(kCount);
  const double step = std::log(high / kLow) / static_cast<double>(kCount - 1);
  for (std::size_t i = 0; i < kCount; ++i) grid[i] = kLow * std::exp(step * static_cast<double>(i));
  grid.back() = high;
  return grid;
}

CvResult cross_validate_lambda(std::span<const double> y, const ChainOrder& chain,
                               std::span<const double> grid, std::size_t folds,
                               std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("cross-validation grid is empty");
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  const std::size_t n = y.size();
  if (n != chain.size()) throw std::invalid_argument("cross-validation: length mismatch");
  if (n <= folds) throw std::invalid_argument("cross-validation: fewer nodes than folds + 1");
  check_finite(y);
  for (double lambda : grid) check_lambda(lambda);

  std::vector<double> along(n);
  for (std::size_t t = 0; t < n; ++t) along[t] = y[chain.order[t]];

  std::vector<std::size_t> shuffled(n);
  std::iota(shuffled.begin(), shuffled.end(), 0);
  Rng rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) fold_of[shuffled[i]] = i % folds;

  CvResult result;
  result.errors.assign(grid.size(), 0.0);
  std::vector<std::size_t> train_pos;
  std::vector<double> train_y;
  for (std::size_t f = 0; f < folds; ++f) {
    train_pos.clear();
    train_y.clear();
    for (std::size_t t = 0; t < n; ++t) {
      if (fold_of[t] != f) {
        train_pos.push_back(t);
        train_y.push_back(along[t]);
      }
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto fit = tv_denoise_1d(train_y, grid[g]);
      // Sweep held-out positions left to right, tracking the retained neighbor.
      std::size_t next = 0;  // first training index with position > t
      for (std::size_t t = 0; t < n; ++t) {
        if (fold_of[t] != f) {
          ++next;
          continue;
        }
        double sum = 0.0;
        int count = 0;
        if (next > 0) {
          sum += fit[next - 1];
          ++count;
        }
        if (next < train_pos.size()) {
          sum += fit[next];
          ++count;
        }
        const double resid = along[t] - sum / count;
        result.errors[g] += resid * resid;
      }
    }
  }
  for (double& e : result.errors) e /= static_cast<double>(n);

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const bool better = result.errors[g] < result.errors[best] ||
                        (result.errors[g] == result.errors[best] && grid[g] < grid[best]);
    if (better) best = g;
  }
  result.lambda = grid[best];
  return result;
}

double choose_lambda_cv(std::span<const double> y, const ChainOrder& chain,
                        std::span<const double> grid, std::size_t folds, std::uint64_t seed) {
  return cross_validate_lambda(y, chain, grid, folds, seed).lambda;
}

}  // namespace graphfuse

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "graphfuse/graph.hpp"

namespace oracle {

// P(X <= x) for X ~ IG(shape, rate), density proportional to x^(-shape-1) e^(-rate/x).
inline double inverse_gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_q(shape, rate / x);
}

inline double ks_statistic(std::vector<double> draws, const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
inline double ks_pvalue(double d, std::size_t count) {
  const double sn = std::sqrt(static_cast<double>(count));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double p = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Standard error of the mean of a correlated series by non-overlapping batch means.
inline double batch_means_se(std::span<const double> series, std::size_t batches = 50) {
  const std::size_t len = series.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    means[b] = mean(series.subspan(b * len, len));
  }
  const double m = mean(means);
  double ss = 0.0;
  for (double x : means) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// theta | y, lambda, sigma2 for the chain prior, by a dense solve of the
// precision (I + sum_k L_k / lambda_k + e_r e_r' / lambda0) / sigma2.
inline Gaussian chain_posterior(std::span<const double> y, const graphfuse::ChainOrder& chain,
                                std::span<const double> lambda, double sigma2, double lambda0) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t t = 0; t + 1 < chain.order.size(); ++t) {
    const auto i = static_cast<Eigen::Index>(chain.order[t]);
    const auto j = static_cast<Eigen::Index>(chain.order[t + 1]);
    const double w = 1.0 / lambda[t];
    prec(i, i) += w;
    prec(j, j) += w;
    prec(i, j) -= w;
    prec(j, i) -= w;
  }
  const auto r = static_cast<Eigen::Index>(chain.root);
  prec(r, r) += 1.0 / lambda0;
  prec /= sigma2;
  Eigen::VectorXd yv(n);
  for (Eigen::Index i = 0; i < n; ++i) yv(i) = y[static_cast<std::size_t>(i)];
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(prec);
  Gaussian g;
  g.cov = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
  g.mean = ldlt.solve(yv / sigma2);
  return g;
}

// Fused-lasso optimality along the chain: with r_t = sum_{u <= t} (y - theta)
// in chain order, |r_t| <= lambda everywhere, r_t = -lambda * sign(theta_{t+1} - theta_t)
// at jumps, and r_{n-1} = 0. Returns the largest violation.
inline double kkt_violation(std::span<const double> y, std::span<const double> theta, double lambda,
                            const graphfuse::ChainOrder& chain, double jump_tol = 1e-9) {
  double r = 0.0;
  double worst = 0.0;
  const std::size_t n = chain.order.size();
  for (std::size_t t = 0; t < n; ++t) {
    const auto v = chain.order[t];
    r += y[v] - theta[v];
    if (t + 1 == n) {
      worst = std::max(worst, std::abs(r));
      break;
    }
    const double jump = theta[chain.order[t + 1]] - theta[v];
    if (std::abs(jump) > jump_tol) {
      worst = std::max(worst, std::abs(r + lambda * (jump > 0 ? 1.0 : -1.0)));
    } else {
      worst = std::max(worst, std::abs(r) - lambda);
    }
  }
  return worst;
}

// Rate of the sigma2 conditional by plain summation over nodes and chain links.
inline double sigma2_rate(std::span<const double> y, std::span<const double> theta,
                          std::span<const double> lambda, const graphfuse::ChainOrder& chain,
                          double b_sigma, double lambda0) {
  double data = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) data += (y[i] - theta[i]) * (y[i] - theta[i]);
  double links = 0.0;
  for (const auto& e : chain.chain_edges) {
    const double d = theta[e.from] - theta[e.to];
    links += d * d / lambda[e.index - 1];
  }
  const double root = theta[chain.root];
  return b_sigma + root * root / (2.0 * lambda0) + data / 2.0 + links / 2.0;
}

}  // namespace oracle

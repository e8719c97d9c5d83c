#pragma once

#include <cstddef>
#include <optional>

#include "graphfuse/random.hpp"

namespace graphfuse {

// Prior constants of the fusion models.
//
// Differences along chain edges are N(0, lambda_k * sigma2) with
// lambda_k ~ IG(a_t, b_t), so (theta_i - theta_j) / sigma is Student-t with
// nu = 2 a_t degrees of freedom and scale m = sqrt(b_t / a_t). The root
// carries N(0, lambda0 * sigma2) and sigma2 ~ IG(a_sigma, b_sigma).
struct Hyperparams {
  double a_t = 2.0;
  double b_t = 1.0;
  double nu = 4.0;
  double m = 0.7071067811865476;
  double a_sigma = 0.5;
  double b_sigma = 0.5;
  double lambda0 = 5.0;
  double laplace_rate = 1.0;             // Laplace-fusion lambda
  std::optional<double> tv_lambda;       // fused-lasso penalty; nullopt = cross-validate

  // Sets a_t and m, deriving nu and b_t.
  void set_t_prior(double shape, double scale);
  // Throws std::invalid_argument when any invariant is violated.
  void validate() const;
};

// a_t = 2, a_sigma = b_sigma = 0.5, lambda0 = 5, laplace_rate = sqrt(2 log n),
// and m chosen so that P(|t_nu(m)| >= sqrt(log n / n)) = 1/n exactly.
Hyperparams default_hyperparams(std::size_t n);

double student_t_cdf(double x, double nu);
// Upper tail P(T > x), accurate far into the tail.
double student_t_sf(double x, double nu);
double student_t_quantile(double p, double nu);

double sample_normal(double mean, double variance, Rng& rng);
// Density proportional to x^(-shape-1) exp(-rate / x).
double sample_inverse_gamma(double shape, double rate, Rng& rng);
double sample_inverse_gaussian(double mean, double shape, Rng& rng);

}  // namespace graphfuse

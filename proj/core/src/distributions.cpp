#include "graphfuse/distributions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace graphfuse {

void Hyperparams::set_t_prior(double shape, double scale) {
  a_t = shape;
  m = scale;
  nu = 2.0 * shape;
  b_t = shape * scale * scale;
}

void Hyperparams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("hyperparameter ") + name + " must be positive");
    }
  };
  positive(a_t, "a_t");
  positive(b_t, "b_t");
  positive(nu, "nu");
  positive(m, "m");
  positive(a_sigma, "a_sigma");
  positive(b_sigma, "b_sigma");
  positive(lambda0, "lambda0");
  positive(laplace_rate, "laplace_rate");
  if (tv_lambda && !(*tv_lambda >= 0.0 && std::isfinite(*tv_lambda))) {
    throw std::invalid_argument("hyperparameter tv_lambda must be nonnegative");
  }
  constexpr double kRel = 1e-12;
  if (std::abs(nu - 2.0 * a_t) > kRel * nu) {
    throw std::invalid_argument("hyperparameters violate nu = 2 a_t");
  }
  if (std::abs(m - std::sqrt(b_t / a_t)) > kRel * m) {
    throw std::invalid_argument("hyperparameters violate m = sqrt(b_t / a_t)");
  }
}

Hyperparams default_hyperparams(std::size_t n) {
  if (n < 2) throw std::invalid_argument("default_hyperparams: n must be at least 2");
  const double dn = static_cast<double>(n);
  const double gap = std::sqrt(std::log(dn) / dn);

  Hyperparams h;
  h.a_sigma = 0.5;
  h.b_sigma = 0.5;
  h.lambda0 = 5.0;
  h.laplace_rate = std::sqrt(2.0 * std::log(dn));
  constexpr double kShape = 2.0;
  const double q = student_t_quantile(1.0 - 1.0 / (2.0 * dn), 2.0 * kShape);
  h.set_t_prior(kShape, gap / q);
  return h;
}

namespace {

double student_t_pdf(double x, double nu) {
  const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

// P(T > x) for x >= 0.
double upper_tail(double x, double nu) {
  const double x2 = x * x;
  if (x2 < nu) {
    // Near the center: 1/2 - P(0 < T < x) avoids cancellation in 1 - z.
    return 0.5 - 0.5 * boost::math::ibeta(0.5, 0.5 * nu, x2 / (nu + x2));
  }
  return 0.5 * boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + x2));
}

void check_nu(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw std::invalid_argument("Student-t degrees of freedom must be positive");
  }
}

}  // namespace

double student_t_sf(double x, double nu) {
  check_nu(nu);
  if (std::isnan(x)) throw std::invalid_argument("student_t_sf: NaN argument");
  return x >= 0.0 ? upper_tail(x, nu) : 1.0 - upper_tail(-x, nu);
}

double student_t_cdf(double x, double nu) {
  check_nu(nu);
  if (std::isnan(x)) throw std::invalid_argument("student_t_cdf: NaN argument");
  return x >= 0.0 ? 1.0 - upper_tail(x, nu) : upper_tail(-x, nu);
}

double student_t_quantile(double p, double nu) {
  check_nu(nu);
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must be in (0,1)");
  if (p == 0.5) return 0.0;
  const double tail = p > 0.5 ? 1.0 - p : p;

  // Solve upper_tail(q) = tail for q > 0: bracket, then safeguarded Newton.
  double lo = 0.0;
  double hi = 1.0;
  while (upper_tail(hi, nu) > tail) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("student_t_quantile: bracketing failed");
  }
  double q = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = upper_tail(q, nu) - tail;
    if (f > 0.0) {
      lo = q;
    } else {
      hi = q;
    }
    const double slope = -student_t_pdf(q, nu);
    double next = slope != 0.0 ? q - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - q);
    q = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * q || hi - lo <= 1e-300) break;
  }
  return p > 0.5 ? q : -q;
}

double sample_normal(double mean, double variance, Rng& rng) {
  if (!(variance > 0.0)) throw std::invalid_argument("sample_normal: variance must be positive");
  return std::normal_distribution<double>(mean, std::sqrt(variance))(rng);
}

double sample_inverse_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("sample_inverse_gamma: shape and rate must be positive");
  }
  return rate / std::gamma_distribution<double>(shape, 1.0)(rng);
}

double sample_inverse_gaussian(double mean, double shape, Rng& rng) {
  if (!(mean > 0.0) || !(shape > 0.0)) {
    throw std::invalid_argument("sample_inverse_gaussian: mean and shape must be positive");
  }
  // Michael, Schucany & Haas transformation, with the smaller root written
  // as mean / (1 + a + sqrt(a^2 + 2a)) to stay exact for large mean / shape.
  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
  const double a = mean * z * z / (2.0 * shape);
  const double x = mean / (1.0 + a + std::sqrt(a * a + 2.0 * a));
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u <= mean / (mean + x) ? x : mean * mean / x;
}

}  // namespace graphfuse

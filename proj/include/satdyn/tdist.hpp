#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "satdyn/errors.hpp"
#include "satdyn/rng.hpp"
#include "satdyn/special_functions.hpp"

namespace satdyn {

// Student's t noise specification: raw t(nu) draws multiplied by scale.
struct TDistSpec {
  double nu = 2.0;
  double scale = 1.0;
};

// Daily noise convention used by the simulation tables:
// ten times the annualized volatility converted to a per-day scale.
inline double daily_noise_scale(double sigma_annual) {
  return 10.0 * sigma_annual / std::sqrt(365.0);
}

namespace detail {

inline void check_nu(double nu) {
  if (!(nu > 0.0)) throw std::domain_error("t-distribution: degrees of freedom must be positive");
}

}  // namespace detail

// Normalized density of the t(nu) distribution.
inline double t_pdf(double x, double nu) {
  detail::check_nu(nu);
  const double ln_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * std::numbers::pi);
  return std::exp(ln_norm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

// Distribution function via the regularized incomplete beta relation
//   P(T <= x) = 1 - I_{nu/(nu+x^2)}(nu/2, 1/2) / 2   for x >= 0,
// which stays accurate far into the tails.
inline double t_cdf(double x, double nu) {
  detail::check_nu(nu);
  if (x == 0.0) return 0.5;
  const double z = nu / (nu + x * x);
  const double half_tail = 0.5 * incomplete_beta_reg(0.5 * nu, 0.5, z);
  return x > 0.0 ? 1.0 - half_tail : half_tail;
}

// Inverse of t_cdf by bracketed bisection with Newton polish.
inline double t_quantile(double p, double nu) {
  detail::check_nu(nu);
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t-quantile: probability must lie in (0,1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, nu);

  double lo = 0.0;
  double hi = 1.0;
  while (t_cdf(hi, nu) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw numerical_error("t-quantile: failed to bracket");
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double err = t_cdf(x, nu) - p;
    if (std::fabs(err) <= 1e-13) return x;
    (err > 0.0 ? hi : lo) = x;
    const double dens = t_pdf(x, nu);
    double next = dens > 0.0 ? x - err / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * (1.0 + std::fabs(x))) break;
    x = next;
  }
  if (std::fabs(t_cdf(x, nu) - p) > 1e-9) {
    throw numerical_error("t-quantile: did not converge");
  }
  return x;
}

// n scaled t(nu) draws from the given substream; deterministic per
// (seed, stream_index).
inline std::vector<double> sample_t(const TDistSpec& spec, NoiseStream stream, std::size_t n) {
  detail::check_nu(spec.nu);
  if (!(spec.scale > 0.0)) throw std::domain_error("sample_t: scale must be positive");
  if (n < 1) throw std::domain_error("sample_t: need at least one draw");
  std::vector<double> out(n);
  RngStream rng(stream);
  for (double& v : out) v = spec.scale * rng.student_t(spec.nu);
  return out;
}

// n scaled standard-normal draws, same substream contract as sample_t.
inline std::vector<double> sample_normal(double scale, NoiseStream stream, std::size_t n) {
  if (!(scale > 0.0)) throw std::domain_error("sample_normal: scale must be positive");
  if (n < 1) throw std::domain_error("sample_normal: need at least one draw");
  std::vector<double> out(n);
  RngStream rng(stream);
  for (double& v : out) v = scale * rng.normal();
  return out;
}

}  // namespace satdyn

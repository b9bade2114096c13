#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "satdyn/quadrature.hpp"
#include "satdyn/tdist.hpp"

namespace satdyn {

// Truncated European-call kernel integral. upper must be finite: the
// untruncated integral diverges for sigma > 0, so a truncation point (often a
// t-quantile critical value) is always an explicit choice. When normalize is
// set the result is multiplied by the t(nu) density constant, turning the
// bare kernel into a probability-weighted tail expectation.
struct QuadratureSpec {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::quiet_NaN();
  double sigma = 0.157;
  double nu = 3.0;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  bool normalize = false;
};

// Unnormalized call-pricing integrand exp(sigma*xi) * (1 + xi^2/nu)^(-(nu+1)/2):
// exponential growth from the price model against the power-law tail of the
// return distribution.
inline double call_integrand(double xi, double sigma, double nu) {
  detail::check_nu(nu);
  if (!(sigma >= 0.0)) throw std::domain_error("call integrand: sigma must be non-negative");
  return std::exp(sigma * xi - 0.5 * (nu + 1.0) * std::log1p(xi * xi / nu));
}

namespace detail {

inline double t_density_constant(double nu) {
  return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                  0.5 * std::log(nu * std::numbers::pi));
}

}  // namespace detail

inline double truncated_call_integral(const QuadratureSpec& spec) {
  detail::check_nu(spec.nu);
  if (!(spec.sigma >= 0.0)) throw std::domain_error("call integral: sigma must be non-negative");
  if (!std::isfinite(spec.lower) || !std::isfinite(spec.upper)) {
    throw std::domain_error(
        "call integral: bounds must be finite; the untruncated integral diverges for sigma > 0 -- "
        "truncate at a quantile, e.g. upper = t_quantile(0.99, nu)");
  }
  if (spec.upper < spec.lower) {
    throw std::domain_error("call integral: upper bound below lower bound");
  }
  if (spec.upper == spec.lower) return 0.0;
  const double value = integrate([&](double xi) { return call_integrand(xi, spec.sigma, spec.nu); },
                                 spec.lower, spec.upper, spec.abs_tol, spec.rel_tol);
  return spec.normalize ? value * detail::t_density_constant(spec.nu) : value;
}

// Integral values accumulated over an increasing grid of truncation points.
// For sigma > 0 the increments eventually grow without bound; for sigma = 0
// they shrink toward zero and the sequence converges.
inline std::vector<std::pair<double, double>> divergence_scan(double sigma, double nu,
                                                              double lower,
                                                              std::span<const double> upper_grid,
                                                              double abs_tol = 1e-10,
                                                              double rel_tol = 1e-8) {
  detail::check_nu(nu);
  if (!(sigma >= 0.0)) throw std::domain_error("divergence scan: sigma must be non-negative");
  if (upper_grid.empty()) throw std::domain_error("divergence scan: empty grid");
  double prev = lower;
  for (const double u : upper_grid) {
    if (!(u > prev)) throw std::domain_error("divergence scan: grid must be increasing above lower");
    prev = u;
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(upper_grid.size());
  double acc = 0.0;
  prev = lower;
  for (const double u : upper_grid) {
    acc += integrate([&](double xi) { return call_integrand(xi, sigma, nu); }, prev, u, abs_tol,
                     rel_tol);
    out.emplace_back(u, acc);
    prev = u;
  }
  return out;
}

// Quantile tic positions for annotating the integrand plot and for default
// truncation points.
inline std::vector<double> critical_value_tics(double nu, std::span<const double> probs) {
  if (probs.empty()) throw std::domain_error("critical values: empty probability list");
  std::vector<double> out;
  out.reserve(probs.size());
  for (const double p : probs) out.push_back(t_quantile(p, nu));
  return out;
}

}  // namespace satdyn

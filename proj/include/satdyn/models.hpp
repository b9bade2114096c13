#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "satdyn/errors.hpp"

namespace satdyn {

// Scalar parameters of one model instance. Units: s0 in currency, alpha per
// day, sigma per sqrt(day), beta in 1/currency, tau in days, pump in
// currency/day, m0 in currency.
struct ModelParams {
  double s0 = 50.0;
  double alpha = 0.0041;
  double sigma = 0.157;
  double beta = 0.0;
  double tau = 1.0;
  double pump = 0.0;
  double m0 = 0.0;
};

// Drift plus noise accumulated over a horizon of t days: x = alpha*t + w.
struct AccumulatedNoise {
  double x = 0.0;
  double t = 1.0;
  double w = 0.0;
};

inline AccumulatedNoise accumulate(double alpha, double t, double w) {
  return {alpha * t + w, t, w};
}

// One simulated outcome; r = ln(s/s0) by construction.
struct PriceSample {
  double x = 0.0;
  double s = 0.0;
  double r = 0.0;
};

namespace detail {

inline void check_params(const ModelParams& p) {
  if (!(p.s0 > 0.0)) throw std::domain_error("model params: s0 must be positive");
  if (!(p.sigma >= 0.0)) throw std::domain_error("model params: sigma must be non-negative");
  if (!(p.beta >= 0.0)) throw std::domain_error("model params: beta must be non-negative");
  if (!(p.tau > 0.0)) throw std::domain_error("model params: tau must be positive");
}

// expm1(y)/y with the removable singularity at y = 0 filled in.
inline double expm1_over(double y) {
  return y == 0.0 ? 1.0 : std::expm1(y) / y;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// standard model: exponential growth in the accumulated drift plus noise

inline PriceSample standard_price(const ModelParams& p, const AccumulatedNoise& noise) {
  detail::check_params(p);
  return {noise.x, p.s0 * std::exp(noise.x), noise.x};
}

inline double standard_mean(const ModelParams& p, double t) {
  detail::check_params(p);
  return p.s0 * std::exp((p.alpha + 0.5 * p.sigma * p.sigma) * t);
}

inline double standard_variance(const ModelParams& p, double t) {
  detail::check_params(p);
  const double s2 = p.sigma * p.sigma;
  return p.s0 * p.s0 * std::exp((2.0 * p.alpha + s2) * t) * std::expm1(s2 * t);
}

// ---------------------------------------------------------------------------
// logistic model: quadratic saturation of gains, losses untouched

// Exact path solution: both integrals evaluated by left-endpoint quadrature
// on the supplied noise increments (increments[i] ~ sigma*f*h over step i).
inline PriceSample logistic_price_path(const ModelParams& p,
                                       std::span<const double> increments, double t) {
  detail::check_params(p);
  if (!(t > 0.0)) throw std::domain_error("logistic path: horizon must be positive");
  if (increments.empty()) throw std::domain_error("logistic path: need at least one step");
  const std::size_t n = increments.size();
  const double h = t / static_cast<double>(n);
  double cumulative = 0.0;  // integral of alpha + sigma*f up to the left endpoint
  double outer = 0.0;       // left Riemann sum of exp(cumulative)
  for (std::size_t i = 0; i < n; ++i) {
    outer += std::exp(cumulative);
    cumulative += p.alpha * h + increments[i];
  }
  outer *= h;
  const double x = cumulative;
  const double s = p.s0 * std::exp(x) / (1.0 + p.beta * p.s0 * outer);
  return {x, s, std::log(s / p.s0)};
}

// Small-step closed form, obtained from the geometric-series limit of the
// path integral. Singular point alpha + w/t = 0 (equivalently x = 0) is
// filled with its limit s0/(1 + beta*s0*t); singular_limit reports when that
// branch was taken.
inline PriceSample logistic_price_approx(const ModelParams& p, const AccumulatedNoise& noise,
                                         bool* singular_limit = nullptr) {
  detail::check_params(p);
  if (!(noise.t > 0.0)) throw std::domain_error("logistic approx: horizon must be positive");
  const double x = noise.x;
  const double t = noise.t;
  if (singular_limit) *singular_limit = (x == 0.0);
  double s;
  if (x == 0.0) {
    s = p.s0 / (1.0 + p.beta * p.s0 * t);
  } else if (x > 0.0) {
    // scaled by e^{-x} so large gains cannot overflow the numerator
    const double rate = x / t;  // alpha + w/t
    s = p.s0 * rate / (rate * std::exp(-x) + p.beta * p.s0 * (-std::expm1(-x)));
  } else {
    s = p.s0 * std::exp(x) / (1.0 + p.beta * p.s0 * t * detail::expm1_over(x));
  }
  return {x, s, std::log(s / p.s0)};
}

// Mean value; finite for all time, with limit (alpha + sigma^2/2)/beta.
inline double logistic_mean(const ModelParams& p, double t) {
  detail::check_params(p);
  const double k = p.alpha + 0.5 * p.sigma * p.sigma;
  if (k == 0.0) return p.s0 / (1.0 + p.beta * p.s0 * t);
  return p.s0 * k / (p.beta * p.s0 * (-std::expm1(-k * t)) + k * std::exp(-k * t));
}

inline double logistic_second_moment(const ModelParams& p, double t) {
  detail::check_params(p);
  const double m = p.alpha + p.sigma * p.sigma;
  if (m == 0.0) {
    const double denom = 1.0 + p.beta * p.s0 * t;
    return p.s0 * p.s0 / (denom * denom);
  }
  const double denom = p.beta * p.s0 * std::expm1(-m * t) - m * std::exp(-m * t);
  return p.s0 * p.s0 * m * m / (denom * denom);
}

// Variance from the two moment solutions.
inline double logistic_variance(const ModelParams& p, double t) {
  const double mean = logistic_mean(p, t);
  return logistic_second_moment(p, t) - mean * mean;
}

// Closed-form long-time variance limit, (alpha + sigma^2 + 3(sigma^2/2)^2) / beta^2.
// Note: this expression is not the limit of logistic_variance, whose long-time
// value is ((alpha+sigma^2)^2 - (alpha+sigma^2/2)^2)/beta^2; see the tests.
inline double logistic_variance_long_time_limit(const ModelParams& p) {
  detail::check_params(p);
  if (!(p.beta > 0.0)) throw std::domain_error("variance limit: beta must be positive");
  const double half_s2 = 0.5 * p.sigma * p.sigma;
  return (p.alpha + p.sigma * p.sigma + 3.0 * half_s2 * half_s2) / (p.beta * p.beta);
}

// Left-endpoint geometric sum (t/n) * sum_{i<n} e^{y i/n} evaluated both ways:
// direct compensated summation and the closed form (t/n)(1-e^y)/(1-e^{y/n}).
inline std::pair<double, double> geometric_series_identity(double y, double t, std::size_t n) {
  if (n < 1) throw std::domain_error("geometric series: need at least one term");
  const double nd = static_cast<double>(n);
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = std::exp(y * static_cast<double>(i) / nd);
    const double yk = term - comp;
    const double tk = sum + yk;
    comp = (tk - sum) - yk;
    sum = tk;
  }
  const double direct = t / nd * sum;
  const double closed = y == 0.0 ? t : t / nd * std::expm1(y) / std::expm1(y / nd);
  return {direct, closed};
}

// ---------------------------------------------------------------------------
// homogeneously saturated model: price and money supply coupled through a
// shared reservoir

// Solves the transcendental relation r + beta*s0*(e^r - 1) = x for the log
// return (the log form of s*e^{beta(s-s0)} = s0*e^x, which cannot overflow).
// The left side is strictly increasing, so the root is unique and lies in
// [min(0,x), max(0,x)]; Newton steps are safeguarded by that bracket.
inline PriceSample saturated_price(const ModelParams& p, const AccumulatedNoise& noise) {
  detail::check_params(p);
  const double x = noise.x;
  const double bs0 = p.beta * p.s0;
  if (x == 0.0 || bs0 == 0.0) {
    return {x, p.s0 * std::exp(x), x};
  }
  double lo = std::min(0.0, x);
  double hi = std::max(0.0, x);
  // asymptote-based first guess: e^r ~ 1 + (x - r)/bs0
  double r = x > 0.0 ? std::log1p(x / bs0) : std::max(lo, x + bs0 * -std::expm1(lo));
  if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);
  bool converged = false;
  for (int i = 0; i < 128; ++i) {
    const double g = r - x + bs0 * std::expm1(r);
    if (std::fabs(g) <= 1e-12) {
      converged = true;
      break;
    }
    (g > 0.0 ? hi : lo) = r;
    const double dg = 1.0 + bs0 * std::exp(r);
    double next = r - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * (1.0 + std::fabs(r))) {
      converged = true;
      break;
    }
    r = next;
  }
  if (!converged && std::fabs(r - x + bs0 * std::expm1(r)) > 1e-10) {
    throw numerical_error("saturated price: root solve did not converge");
  }
  return {x, p.s0 * std::exp(r), r};
}

// Taylor approximation of the saturated relation; valid only for
// 0 <= beta*s0 < 1 (beyond that boundary the formula yields degenerate or
// negative prices).
inline PriceSample saturated_price_approx(const ModelParams& p, const AccumulatedNoise& noise) {
  detail::check_params(p);
  const double bs0 = p.beta * p.s0;
  if (!(bs0 < 1.0)) {
    throw std::domain_error("saturated approximation requires beta*s0 < 1");
  }
  const double x = noise.x;
  double s;
  if (x >= 0.0) {
    s = p.s0 / (std::exp(-x) * (1.0 - bs0) + bs0);
  } else {
    s = p.s0 * std::exp(x) / (1.0 + bs0 * std::expm1(x));
  }
  return {x, s, std::log(s / p.s0)};
}

// Steady-state money supply (alpha + noise)/(1 + beta*s).
inline double money_supply_steady_state(const ModelParams& p, double s, double noise_term) {
  detail::check_params(p);
  return (p.alpha + noise_term) / (1.0 + p.beta * s);
}

struct ReservoirPoint {
  double t = 0.0;
  double m = 0.0;
  double s = 0.0;
};

// Explicit Euler integration of the coupled reservoir/price system
//   dM/dt = pump - beta*S*M - (M - m0)/tau
//   dS/dt = M*S + S * (noise increment)/h
// noise_increments holds sigma*f*h per step (empty means noise off) and must
// match the step count. m_init defaults to the steady-state money supply at
// s0 with no noise. hold_price freezes S at s0 so the reservoir relaxation
// can be observed in isolation.
inline std::vector<ReservoirPoint> coupled_rate_integration(
    const ModelParams& p, std::span<const double> noise_increments, double horizon, double step,
    std::optional<double> m_init = std::nullopt, bool hold_price = false) {
  detail::check_params(p);
  if (!(step > 0.0) || !(horizon > 0.0)) {
    throw std::domain_error("rate integration: horizon and step must be positive");
  }
  const auto nsteps = static_cast<std::size_t>(std::llround(horizon / step));
  if (nsteps == 0) throw std::domain_error("rate integration: horizon shorter than one step");
  if (!noise_increments.empty() && noise_increments.size() != nsteps) {
    throw std::domain_error("rate integration: noise path length must equal the step count");
  }

  double m = m_init ? *m_init : (p.pump + p.m0 / p.tau) / (1.0 / p.tau + p.beta * p.s0);
  double s = p.s0;
  std::vector<ReservoirPoint> out;
  out.reserve(nsteps + 1);
  out.push_back({0.0, m, s});
  for (std::size_t i = 0; i < nsteps; ++i) {
    const double inc = noise_increments.empty() ? 0.0 : noise_increments[i];
    const double dm = p.pump - p.beta * s * m - (m - p.m0) / p.tau;
    const double s_next = hold_price ? s : s + step * m * s + s * inc;
    const double m_next = m + step * dm;
    if (!(s_next > 0.0)) {
      throw numerical_error("rate integration: price became non-positive at t = " +
                            std::to_string((static_cast<double>(i) + 1.0) * step) +
                            "; reduce the step size");
    }
    m = m_next;
    s = s_next;
    out.push_back({(static_cast<double>(i) + 1.0) * step, m, s});
  }
  return out;
}

}  // namespace satdyn

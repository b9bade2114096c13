#pragma once

#include <cmath>
#include <stdexcept>

#include "satdyn/errors.hpp"

namespace satdyn {

namespace detail {

// Continued fraction for the incomplete beta function, modified Lentz scheme.
// Converges rapidly for x < (a+1)/(a+b+2); callers apply the symmetry
// transformation outside that region.
inline double beta_cont_fraction(double a, double b, double x) {
  constexpr int max_iter = 400;
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 4.0e-16) return h;
  }
  throw numerical_error("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta function I_x(a, b).
inline double incomplete_beta_reg(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_cont_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_cont_fraction(b, a, 1.0 - x) / b;
}

}  // namespace satdyn

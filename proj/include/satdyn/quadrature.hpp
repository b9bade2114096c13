#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "satdyn/errors.hpp"

namespace satdyn {

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]; node 7 is the center.
// Odd-index nodes carry the embedded 7-point Gauss rule.
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGkWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
};

template <class F>
Segment gk15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kGkWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGkNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kGkWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration over a finite interval: the segment with
// the largest embedded error estimate is bisected until the summed error drops
// below max(abs_tol, rel_tol * |value|).
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10, double rel_tol = 1e-8) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::domain_error("integrate: bounds must be finite");
  }
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw std::domain_error("integrate: tolerances must be positive");
  }
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  constexpr std::size_t max_segments = 20000;
  auto checked_gk15 = [&f](double lo, double hi) {
    const detail::Segment s = detail::gk15(f, lo, hi);
    if (!std::isfinite(s.value) || !std::isfinite(s.error)) {
      throw numerical_error("integrate: integrand produced a non-finite value");
    }
    return s;
  };
  std::vector<detail::Segment> segments;
  segments.reserve(256);
  segments.push_back(checked_gk15(a, b));
  double total = segments[0].value;
  double err = segments[0].error;

  while (err > std::max(abs_tol, rel_tol * std::fabs(total))) {
    if (segments.size() >= max_segments) {
      throw numerical_error("integrate: subdivision budget exhausted before reaching tolerance");
    }
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const detail::Segment& u, const detail::Segment& v) {
                                    return u.error < v.error;
                                  });
    const detail::Segment parent = *worst;
    const double mid = 0.5 * (parent.a + parent.b);
    if (!(mid > parent.a && mid < parent.b)) {
      throw numerical_error(
          "integrate: interval degenerated to machine width before reaching tolerance "
          "(non-integrable feature inside the range?)");
    }
    const detail::Segment left = checked_gk15(parent.a, mid);
    const detail::Segment right = checked_gk15(mid, parent.b);
    total += left.value + right.value - parent.value;
    err += left.error + right.error - parent.error;
    *worst = left;
    segments.push_back(right);
  }
  return sign * total;
}

}  // namespace satdyn

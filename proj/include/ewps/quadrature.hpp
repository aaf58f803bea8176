// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Globally adaptive Gauss-Kronrod (7-15) quadrature. Intervals are kept in a
// worst-error-first heap and split until the accumulated error estimate meets
// the requested tolerance. Endpoint singularities of the x^{a-1} kind are
// handled by the subdivision itself since Kronrod nodes never touch the ends.

#ifndef EWPS_QUADRATURE_HPP
#define EWPS_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "ewps/errors.hpp"

namespace ewps {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// QUADPACK dqk15 nodes and weights.
inline constexpr double kGk15X[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGk15W[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kG7W[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, double& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kGk15W[7] * fc;
  double resg = kG7W[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * kGk15X[j]);
    const double f2 = f(c + h * kGk15X[j]);
    resk += kGk15W[j] * (f1 + f2);
    if (j % 2 == 1) resg += kG7W[j / 2] * (f1 + f2);
  }
  value = resk * h;
  error = std::fabs((resk - resg) * h);
  if (!std::isfinite(value)) error = std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// ∫_a^b f, to relative tolerance rel_tol (plus optional absolute floor).
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                     int max_intervals = 4000) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  struct Seg {
    double a, b, value, error;
    bool operator<(const Seg& o) const { return error < o.error; }
  };
  std::priority_queue<Seg> heap;
  Seg s0{a, b, 0, 0};
  detail::gk15(f, a, b, s0.value, s0.error);
  double total = s0.value;
  double err = s0.error;
  heap.push(s0);
  int n = 1;
  const double min_width = std::fabs(b - a) * 1e-15;
  while (err > std::max(abs_tol, rel_tol * std::fabs(total)) && n < max_intervals) {
    Seg worst = heap.top();
    if (std::fabs(worst.b - worst.a) < min_width) break;  // cannot refine further
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    Seg l{worst.a, m, 0, 0}, r{m, worst.b, 0, 0};
    detail::gk15(f, l.a, l.b, l.value, l.error);
    detail::gk15(f, r.a, r.b, r.value, r.error);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++n;
  }
  out.value = total;
  out.error = err;
  out.intervals = n;
  out.converged = std::isfinite(total) && err <= std::max(abs_tol, rel_tol * std::fabs(total)) * 1.01 + 1e-300;
  return out;
}

/// ∫_a^b f, throwing integrability_error when the tolerance is unreachable.
template <class F>
double integrate_or_throw(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                          const char* what = "quadrature failed to converge") {
  const QuadResult r = integrate(f, a, b, rel_tol, abs_tol);
  if (!r.converged) {
    throw integrability_error(std::string(what) + " [error=" + std::to_string(r.error) +
                              ", intervals=" + std::to_string(r.intervals) + "]");
  }
  return r.value;
}

/// ∫_a^∞ f via the rational map y = a + t/(1-t), t ∈ (0,1).
template <class F>
QuadResult integrate_upper(F&& f, double a, double rel_tol = 1e-10, double abs_tol = 0.0,
                           int max_intervals = 4000) {
  return integrate(
      [&f, a](double t) {
        const double om = 1.0 - t;
        const double y = a + t / om;
        return f(y) / (om * om);
      },
      0.0, 1.0, rel_tol, abs_tol, max_intervals);
}

}  // namespace ewps

#endif  // EWPS_QUADRATURE_HPP

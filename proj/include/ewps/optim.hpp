// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Small dense optimizers for the likelihood work: BFGS with backtracking line
// search (2-4 free parameters), Brent's bounded 1-D minimizer, and a
// safeguarded bracketed root finder.

#ifndef EWPS_OPTIM_HPP
#define EWPS_OPTIM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "ewps/errors.hpp"

namespace ewps {

struct OptimResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f via BFGS. `fg(x, grad)` returns f and fills grad; +inf marks an
/// invalid point (the line search backs off).
template <class FG>
OptimResult bfgs_minimize(FG&& fg, Eigen::VectorXd x0, int max_iter = 500,
                          double grad_tol = 1e-9) {
  const int d = static_cast<int>(x0.size());
  OptimResult out;
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd g(d);
  double f = fg(x, g);
  if (!std::isfinite(f)) {
    out.x = x;
    out.grad = g;
    return out;  // bad start
  }
  int it = 0;
  for (; it < max_iter; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < grad_tol) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd dir = -(H * g);
    double slope = dir.dot(g);
    if (!(slope < 0)) {  // lost positive definiteness; restart from steepest descent
      H.setIdentity();
      dir = -g;
      slope = dir.dot(g);
    }
    double step = 1.0;
    Eigen::VectorXd xn(d), gn(d);
    double fn = std::numeric_limits<double>::infinity();
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + step * dir;
      fn = fg(xn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) break;  // no descent possible at this resolution
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    const double ys = y.dot(s);
    if (ys > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / ys;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    const double df = f - fn;
    x = xn;
    f = fn;
    g = gn;
    if (df < 1e-14 * (std::fabs(f) + 1.0) && s.lpNorm<Eigen::Infinity>() < 1e-13) break;
  }
  out.x = x;
  out.f = f;
  out.grad = g;
  out.iterations = it;
  if (g.lpNorm<Eigen::Infinity>() < grad_tol) out.converged = true;
  return out;
}

/// Brent's method for the minimum of f on [a, b].
template <class F>
double brent_min(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::fabs(x) + 1e-15;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool parabolic = false;
    if (std::fabs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double pp = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0) pp = -pp;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (std::fabs(pp) < std::fabs(0.5 * q * etemp) && pp > q * (a - x) && pp < q * (b - x)) {
        parabolic = true;
        d = pp / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x ? tol1 : -tol1);
      }
    }
    if (!parabolic) {
      e = (x < m ? b : a) - x;
      d = gold * e;
    }
    const double u = std::fabs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

/// Safeguarded bisection/secant root of f on a bracketing [a, b].
template <class F>
double brent_root(F&& f, double a, double b, double tol = 1e-12, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw domain_error("brent_root: interval does not bracket a root");
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    // secant proposal, clipped into the bracket
    double s = (std::fabs(fb - fa) > 1e-300) ? b - fb * (b - a) / (fb - fa) : m;
    if (!(s > std::min(a, b) && s < std::max(a, b))) s = m;
    const double fs = f(s);
    if (fs == 0 || std::fabs(b - a) < tol * (std::fabs(a) + std::fabs(b) + 1e-300)) return s;
    if (fa * fs < 0) {
      b = s; fb = fs;
    } else {
      a = s; fa = fs;
    }
    // every few steps force a bisection so the bracket provably shrinks
    if (it % 3 == 2) {
      const double mm = 0.5 * (a + b);
      const double fm = f(mm);
      if (fm == 0) return mm;
      if (fa * fm < 0) {
        b = mm; fb = fm;
      } else {
        a = mm; fa = fm;
      }
    }
  }
  return 0.5 * (a + b);
}

}  // namespace ewps

#endif  // EWPS_OPTIM_HPP

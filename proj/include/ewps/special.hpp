// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Scalar special functions and numerically stable primitives shared by the
// distribution code: log(1-e^{-t}), the (non-regularized) incomplete gamma
// pair, the standard normal quantile, and the Kolmogorov distribution.

#ifndef EWPS_SPECIAL_HPP
#define EWPS_SPECIAL_HPP

#include <cmath>
#include <limits>

#include "ewps/errors.hpp"

namespace ewps {

inline constexpr double kPi = 3.14159265358979323846;

/// log(1 - e^{-t}) for t > 0 without cancellation near either end.
inline double log1mexp(double t) {
  if (!(t > 0)) {
    if (t == 0) return -std::numeric_limits<double>::infinity();
    throw domain_error("log1mexp: argument must be nonnegative");
  }
  // switch point ln 2, cf. Maechler (2012)
  return t > 0.6931471805599453 ? std::log1p(-std::exp(-t)) : std::log(-std::expm1(-t));
}

/// 1 - e^{-t} for t >= 0.
inline double one_mexp(double t) { return -std::expm1(-t); }

namespace detail {

// Regularized lower incomplete gamma P(s,x) by power series; use for x < s+1.
inline double gamma_p_series(double s, double x) {
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Regularized upper incomplete gamma Q(s,x) by continued fraction; use for x >= s+1.
inline double gamma_q_contfrac(double s, double x) {
  const double fpmin = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace detail

/// Regularized lower incomplete gamma P(s,x) = γ(s,x)/Γ(s).
inline double gamma_p(double s, double x) {
  if (!(s > 0) || x < 0) throw domain_error("gamma_p: require s > 0, x >= 0");
  if (x == 0) return 0.0;
  return x < s + 1.0 ? detail::gamma_p_series(s, x) : 1.0 - detail::gamma_q_contfrac(s, x);
}

/// Regularized upper incomplete gamma Q(s,x) = Γ(s,x)/Γ(s).
inline double gamma_q(double s, double x) {
  if (!(s > 0) || x < 0) throw domain_error("gamma_q: require s > 0, x >= 0");
  if (x == 0) return 1.0;
  return x < s + 1.0 ? 1.0 - detail::gamma_p_series(s, x) : detail::gamma_q_contfrac(s, x);
}

/// Lower incomplete gamma ∫_0^t x^{s-1} e^{-x} dx.
inline double lower_incomplete_gamma(double s, double t) {
  return gamma_p(s, t) * std::exp(std::lgamma(s));
}

/// Upper incomplete gamma ∫_t^∞ x^{s-1} e^{-x} dx.
inline double upper_incomplete_gamma(double s, double t) {
  return gamma_q(s, t) * std::exp(std::lgamma(s));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

/// Inverse standard normal cdf (Acklam's rational minimax plus one Halley step).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("normal_quantile: p must lie in (0,1)");
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // one Halley refinement brings the result to full double precision
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

/// P(K > x) for the asymptotic Kolmogorov distribution of sqrt(n)·D_n,
/// 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²x²}, with the Jacobi-theta dual used for small
/// x where the direct series converges slowly.
inline double kolmogorov_pvalue(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    const double t = -kPi * kPi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k < 40; k += 2) {
      const double term = std::exp(t * k * k);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    const double cdf = std::sqrt(2.0 * kPi) / x * sum;
    const double p = 1.0 - cdf;
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12 * (sum > 0 ? sum : 1.0)) break;
  }
  const double p = 2.0 * sum;
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

}  // namespace ewps

#endif  // EWPS_SPECIAL_HPP

// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Exponentiated Weibull distribution with cdf G(x) = (1 - e^{-(βx)^γ})^α.
// Everything routes through log(1-e^{-t}) so the α-1 powers never amplify
// cancellation near either tail.

#ifndef EWPS_EW_HPP
#define EWPS_EW_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "ewps/errors.hpp"
#include "ewps/power_series.hpp"
#include "ewps/quadrature.hpp"
#include "ewps/rng.hpp"
#include "ewps/special.hpp"

namespace ewps {

struct EwParams {
  double alpha;  // shape exponent
  double beta;   // rate, 1/time
  double gamma;  // Weibull shape

  EwParams(double a, double b, double g) : alpha(a), beta(b), gamma(g) {
    if (!(a > 0) || !(b > 0) || !(g > 0) || !std::isfinite(a) || !std::isfinite(b) ||
        !std::isfinite(g))
      throw domain_error("EwParams: alpha, beta, gamma must be positive and finite");
  }
};

namespace detail {
inline double weibull_exponent(const EwParams& p, double x) {
  return std::pow(p.beta * x, p.gamma);  // (βx)^γ
}
}  // namespace detail

/// G(x) = (1 - e^{-(βx)^γ})^α; 0 at x = 0.
inline double ew_cdf(const EwParams& p, double x) {
  if (x < 0 || !std::isfinite(x)) {
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    throw domain_error("ew_cdf: x must be nonnegative");
  }
  if (x == 0) return 0.0;
  return std::exp(p.alpha * log1mexp(detail::weibull_exponent(p, x)));
}

/// log g(x); the density is evaluated on the open support x > 0 only.
/// (At x = 0 the density limit is 0 for αγ > 1, βγα at αγ = 1, +∞ otherwise.)
inline double ew_log_pdf(const EwParams& p, double x) {
  if (!(x > 0) || !std::isfinite(x)) throw domain_error("ew_pdf: x must be positive");
  const double w = detail::weibull_exponent(p, x);
  return std::log(p.alpha) + std::log(p.gamma) + p.gamma * std::log(p.beta) +
         (p.gamma - 1.0) * std::log(x) - w + (p.alpha - 1.0) * log1mexp(w);
}

inline double ew_pdf(const EwParams& p, double x) { return std::exp(ew_log_pdf(p, x)); }

/// (survival, hazard) at x > 0; throws overflow_error if survival underflows.
inline std::pair<double, double> ew_hazard(const EwParams& p, double x) {
  if (!(x > 0)) throw domain_error("ew_hazard: x must be positive");
  const double w = detail::weibull_exponent(p, x);
  const double survival = -std::expm1(p.alpha * log1mexp(w));
  if (!(survival > 0)) throw overflow_error("ew_hazard: survival underflowed to zero");
  return {survival, ew_pdf(p, x) / survival};
}

/// (1/β)(-ln(1 - q^{1/α}))^{1/γ}.
inline double ew_quantile(const EwParams& p, double q) {
  if (!(q > 0 && q < 1)) throw domain_error("ew_quantile: q must lie in (0,1)");
  const double t = -std::log1p(-std::exp(std::log(q) / p.alpha));
  return std::exp(std::log(t) / p.gamma) / p.beta;
}

namespace detail {

// k-th raw moment for nonnegative-integer-like shape handling:
// E X^k = shape β^{-k} Γ(k/γ+1) Σ_j (-1)^j C(shape-1, j) (j+1)^{-(k/γ+1)}.
// The sum terminates at shape-1 for integer shape; otherwise the tail rule applies.
inline double ew_moment_by_series(double shape, double beta, double gamma, int k) {
  if (k < 1) throw domain_error("ew_moment: k must be >= 1");
  const double p = k / gamma + 1.0;
  const auto s = alt_binom_sum(shape - 1.0, p);
  if (!s.converged)
    throw convergence_error("ew_moment: alternating series failed the tail criterion", s.terms,
                            s.value);
  return shape * std::pow(beta, -k) * std::tgamma(p) * s.value;
}

}  // namespace detail

/// Eq.-(3)-style series (any α > 0); tail truncated at 1e-14 relative.
inline double ew_moment_series(const EwParams& p, int k) {
  return detail::ew_moment_by_series(p.alpha, p.beta, p.gamma, k);
}

/// Closed form for integer α: α β^{-k} Γ(k/γ+1) A_k(γ) with
/// A_k = 1 + Σ_{j=1}^{α-1} (-1)^j C(α-1, j) (j+1)^{-(k/γ+1)}.
inline double ew_moment_closed(const EwParams& p, int k) {
  if (k < 1) throw domain_error("ew_moment: k must be >= 1");
  const double r = std::nearbyint(p.alpha);
  if (!(std::fabs(p.alpha - r) < 1e-12) || r < 1)
    throw domain_error("ew_moment_closed: alpha must be a positive integer");
  const int a = static_cast<int>(r);
  const double pw = k / p.gamma + 1.0;
  double A = 1.0;
  for (int j = 1; j <= a - 1; ++j) {
    const double lb = std::lgamma(a) - std::lgamma(j + 1.0) - std::lgamma(a - j + 0.0);
    A += (j % 2 == 0 ? 1.0 : -1.0) * std::exp(lb - pw * std::log(j + 1.0));
  }
  return p.alpha * std::pow(p.beta, -k) * std::tgamma(pw) * A;
}

/// k-th raw moment; closed form when α is integer, series otherwise.
inline double ew_moment(const EwParams& p, int k) {
  const double r = std::nearbyint(p.alpha);
  if (std::fabs(p.alpha - r) < 1e-12 && r >= 1) return ew_moment_closed(p, k);
  return ew_moment_series(p, k);
}

/// n inverse-transform draws from the caller-owned stream.
inline std::vector<double> ew_sample(const EwParams& p, UniformStream& stream, std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = ew_quantile(p, stream.next());
  return out;
}

}  // namespace ewps

#endif  // EWPS_EW_HPP

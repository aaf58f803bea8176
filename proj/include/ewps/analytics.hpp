// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Reliability and shape analytics of the compound law: Rényi/Shannon
// entropies, order statistics, residual and reversed residual life, PWMs,
// mean deviations, and the Bonferroni/Lorenz/TTT/Gini curves.
//
// Adaptive quadrature (with the u = (βy)^γ tail substitution) is the
// authoritative evaluator throughout; the incomplete-gamma series forms are
// cross-check evaluators that raise convergence_error with diagnostics
// instead of returning silently degraded values.

#ifndef EWPS_ANALYTICS_HPP
#define EWPS_ANALYTICS_HPP

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ewps/errors.hpp"
#include "ewps/ewps.hpp"
#include "ewps/quadrature.hpp"
#include "ewps/special.hpp"

namespace ewps {

namespace detail {
// Mass below this is treated as numerically zero for conditional quantities.
inline constexpr double kMinConditioningMass = 1e-9;
}  // namespace detail

/// Rényi entropy (1-r)^{-1} log ∫ f^r by adaptive quadrature. Throws
/// integrability_error when f^r is not integrable (r(αγ-1) ≤ -1 at the
/// origin) or the quadrature cannot converge.
inline double renyi_entropy(const EwpsParams& p, double r) {
  if (!(r > 0) || r == 1.0) throw domain_error("renyi_entropy: require r > 0, r != 1");
  const double ag = p.ew.alpha * p.ew.gamma;
  if (r * (ag - 1.0) <= -1.0)
    throw integrability_error("renyi_entropy: f^r diverges at the origin for r(alpha*gamma-1) <= -1");
  const double y_hi = std::exp(std::log(165.0 / r) / p.ew.gamma) / p.ew.beta;
  const double integral = integrate_or_throw(
      [&](double y) { return y > 0 ? std::exp(r * ewps_log_pdf(p, y)) : 0.0; }, 0.0, y_hi, 1e-9,
      0.0, "renyi_entropy: quadrature diverged");
  return std::log(integral) / (1.0 - r);
}

/// Series evaluator for ∫ f^r built on the c_{i,j} recurrence applied to
/// [C'(u)]^r. Requires ρ = (r(γ-1)+1)/γ > 0 for the term-by-term integrals to
/// exist; convergence diagnostics otherwise.
inline double renyi_entropy_series(const EwpsParams& p, double r) {
  if (!(r > 0) || r == 1.0) throw domain_error("renyi_entropy: require r > 0, r != 1");
  const double rho = (r * (p.ew.gamma - 1.0) + 1.0) / p.ew.gamma;
  if (!(rho > 0))
    throw convergence_error("renyi_entropy series: termwise integrals diverge (rho <= 0)", 0, rho);
  int K = 128;
  long double acc = 0.0L;
  for (;;) {
    const std::vector<double> a = p.family.coefficients(K + 1);
    std::vector<double> w(static_cast<std::size_t>(K + 1));
    for (int i = 0; i <= K; ++i) w[i] = (i + 1.0) * a[i];  // C'(u) coefficients
    const std::vector<double> c = power_coeffs(w, r, static_cast<std::size_t>(K));
    acc = 0.0L;
    bool tail_ok = false;
    double last = 0.0;
    for (int i = 0; i <= K; ++i) {
      if (c[i] == 0.0) continue;
      const double q = p.ew.alpha * (r + i) - r;
      const auto inner = detail::alt_binom_sum(q, rho, r);
      if (!inner.converged)
        throw convergence_error("renyi_entropy series: inner binomial sum stalled", inner.terms,
                                inner.value);
      const double term = c[i] * std::pow(p.theta, i) * inner.value;
      acc += term;
      last = term;
      if (i > 16 && std::fabs(term) < 1e-13 * std::fabs(static_cast<double>(acc))) {
        tail_ok = true;
        break;
      }
    }
    if (tail_ok) break;
    K *= 2;
    if (K > 8192)
      throw convergence_error("renyi_entropy series: coefficient sum did not meet the tail rule",
                              K, last);
  }
  const double log_pref =
      r * (std::log(p.ew.alpha * p.theta) - p.family.log_c(p.theta)) +
      (r - 1.0) * std::log(p.ew.gamma) + (r - 1.0) * std::log(p.ew.beta) + std::lgamma(rho);
  const double integral = std::exp(log_pref) * static_cast<double>(acc);
  return std::log(integral) / (1.0 - r);
}

/// Shannon entropy E[-log f(Y)].
inline double shannon_entropy(const EwpsParams& p) {
  return ewps_expect(p, [&](double y) { return -ewps_log_pdf(p, y); }, 1e-9);
}

/// (pdf, cdf) of the r-th order statistic of a sample of n.
inline std::pair<double, double> order_stat_dist(const EwpsParams& p, int r, int n, double y) {
  if (r < 1 || n < 1 || r > n) throw domain_error("order_stat_dist: require 1 <= r <= n");
  if (!(y > 0)) throw domain_error("order_stat_dist: y must be positive");
  const double F = ewps_cdf(p, y);
  const double S = ewps_survival(p, y);
  const double log_beta = std::lgamma(static_cast<double>(r)) +
                          std::lgamma(static_cast<double>(n - r + 1)) -
                          std::lgamma(static_cast<double>(n + 1));
  double pdf = 0.0;
  if (F > 0 || r == 1) {
    const double logF = F > 0 ? std::log(F) : -std::numeric_limits<double>::infinity();
    const double logS = S > 0 ? std::log(S) : -std::numeric_limits<double>::infinity();
    const double lp = ewps_log_pdf(p, y) + (r - 1.0) * logF + (n - r) * logS - log_beta;
    pdf = std::exp(lp);
  }
  double cdf = 0.0;
  for (int k = r; k <= n; ++k) {
    if (F == 0.0) break;
    const double lb = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double logS = S > 0 ? std::log(S) : -std::numeric_limits<double>::infinity();
    if (S == 0.0 && k < n) continue;
    cdf += std::exp(lb + k * std::log(F) + (k < n ? (n - k) * logS : 0.0));
  }
  return {pdf, std::min(cdf, 1.0)};
}

/// E[Y_{r:n}^k] by quadrature of y^k f_{r:n}.
inline double order_stat_moment(const EwpsParams& p, int r, int n, int k) {
  if (r < 1 || n < 1 || r > n) throw domain_error("order_stat_moment: require 1 <= r <= n");
  if (k < 1) throw domain_error("order_stat_moment: k must be >= 1");
  const double log_beta = std::lgamma(static_cast<double>(r)) +
                          std::lgamma(static_cast<double>(n - r + 1)) -
                          std::lgamma(static_cast<double>(n + 1));
  return ewps_expect(
      p,
      [&](double y) {
        const double F = ewps_cdf(p, y);
        const double S = ewps_survival(p, y);
        double h = std::pow(y, k) * std::exp(-log_beta);
        if (r > 1) h *= std::pow(F, r - 1.0);
        if (n > r) h *= std::pow(S, static_cast<double>(n - r));
        return h;
      },
      1e-9);
}

/// Barakat-Abdelkader cross-check: k Σ_{j=n-r+1}^{n} (-1)^{j-n+r-1}
/// C(j-1, n-r) C(n, j) ∫ y^{k-1} S(y)^j dy.
inline double order_stat_moment_ba(const EwpsParams& p, int r, int n, int k) {
  if (r < 1 || n < 1 || r > n) throw domain_error("order_stat_moment: require 1 <= r <= n");
  if (k < 1) throw domain_error("order_stat_moment: k must be >= 1");
  const double y_hi = ewps_quantile(p, 1.0 - 1e-15);
  double acc = 0.0;
  for (int j = n - r + 1; j <= n; ++j) {
    const double lc = std::lgamma(static_cast<double>(j)) -
                      std::lgamma(static_cast<double>(n - r + 1)) -
                      std::lgamma(static_cast<double>(j - n + r)) + std::lgamma(n + 1.0) -
                      std::lgamma(j + 1.0) - std::lgamma(static_cast<double>(n - j + 1));
    const double sign = ((j - n + r - 1) % 2 == 0) ? 1.0 : -1.0;
    const double integral = integrate_or_throw(
        [&](double y) {
          return y > 0 ? std::pow(y, k - 1.0) * std::pow(ewps_survival(p, y), j) : 0.0;
        },
        0.0, y_hi, 1e-9, 0.0, "order_stat_moment_ba: quadrature failed");
    acc += sign * std::exp(lc) * integral;
  }
  return k * acc;
}

/// r-th residual-life moment E[(Y-t)^r | Y > t] by quadrature.
inline double residual_moment(const EwpsParams& p, double t, int r) {
  if (t < 0) throw domain_error("residual_moment: t must be nonnegative");
  if (r < 1) throw domain_error("residual_moment: r must be >= 1");
  const double S = t == 0 ? 1.0 : ewps_survival(p, t);
  if (!(S > detail::kMinConditioningMass))
    throw overflow_error("residual_moment: survival at t is numerically zero");
  const double u_lo = t == 0 ? 0.0 : std::pow(p.ew.beta * t, p.ew.gamma);
  const double num = ewps_expect(
      p, [&](double y) { return y > t ? std::pow(y - t, r) : 0.0; }, u_lo,
      detail::ewps_tail_cap(p), 1e-10);
  return num / S;
}

/// §7-style series for the residual moment (upper incomplete gamma form).
inline double residual_moment_series(const EwpsParams& p, double t, int r) {
  if (t < 0) throw domain_error("residual_moment: t must be nonnegative");
  if (r < 1) throw domain_error("residual_moment: r must be >= 1");
  const double S = t == 0 ? 1.0 : ewps_survival(p, t);
  if (!(S > detail::kMinConditioningMass))
    throw overflow_error("residual_moment: survival at t is numerically zero");
  const double wt = std::pow(p.ew.beta * t, p.ew.gamma);
  long double acc = 0.0L;
  for (int i = 0; i <= r; ++i) {
    if (t == 0.0 && i > 0) break;
    const double pw = (r - i) / p.ew.gamma + 1.0;
    const double lchoose =
        std::lgamma(r + 1.0) - std::lgamma(i + 1.0) - std::lgamma(r - i + 1.0);
    const double outer =
        std::exp(lchoose) * std::pow(t, i) * ((i % 2 == 0) ? 1.0 : -1.0);
    long double sum_n = 0.0L;
    double last = 0.0;
    int n = 1;
    const int cutoff = p.family.coeff_cutoff();
    for (; n <= 100000; ++n) {
      if (n > cutoff) break;
      const double weight = n * p.family.pmf(p.theta, n);
      // inner alternating sum with the incomplete-gamma factor
      long double sj = 0.0L;
      long double bj = 1.0L;  // (-1)^j C(nα-1, j)
      const double x = n * p.ew.alpha - 1.0;
      const bool integral_x = x >= 0 && std::fabs(x - std::nearbyint(x)) < 1e-9;
      for (long j = 0; j <= 4000; ++j) {
        const double term = static_cast<double>(bj) *
                            std::exp(-pw * std::log(j + 1.0)) *
                            upper_incomplete_gamma(pw, (j + 1.0) * wt);
        sj += term;
        if (integral_x && j >= static_cast<long>(std::nearbyint(x))) break;
        if (!integral_x && j > 32 && std::fabs(term) < 1e-13 * std::fabs(static_cast<double>(sj)) &&
            j > x)
          break;
        if (j == 4000)
          throw convergence_error("residual_moment series: inner sum stalled", j, term);
        bj *= (static_cast<long double>(j) - x) / (j + 1.0L);
      }
      const double term_n = weight * static_cast<double>(sj);
      sum_n += term_n;
      last = term_n;
      if (n >= 8 && std::fabs(term_n) < 1e-13 * std::fabs(static_cast<double>(sum_n))) break;
    }
    if (n > 100000)
      throw convergence_error("residual_moment series: outer sum stalled", n, last);
    acc += outer * std::pow(p.ew.beta, -(r - i)) * static_cast<double>(sum_n);
  }
  return p.ew.alpha * static_cast<double>(acc) / S;
}

/// I(t) = ∫_0^t F(y) dy by quadrature.
inline double cdf_integral(const EwpsParams& p, double t) {
  if (t < 0) throw domain_error("cdf_integral: t must be nonnegative");
  if (t == 0) return 0.0;
  return integrate_or_throw([&](double y) { return y > 0 ? ewps_cdf(p, y) : 0.0; }, 0.0, t, 1e-10,
                            0.0, "cdf_integral: quadrature failed");
}

/// Lower-incomplete-gamma series for I(t) (Thm.-1 cross-check):
/// I(t) = t + (γβ)^{-1} Σ_n P(N=n) Σ_{k≥1} (-1)^k C(nα, k) k^{-1/γ} Ψ(1/γ; k(βt)^γ).
inline double cdf_integral_series(const EwpsParams& p, double t) {
  if (t < 0) throw domain_error("cdf_integral: t must be nonnegative");
  if (t == 0) return 0.0;
  const double wt = std::pow(p.ew.beta * t, p.ew.gamma);
  const double inv_g = 1.0 / p.ew.gamma;
  long double acc = 0.0L;
  double last = 0.0;
  int n = 1;
  const int cutoff = p.family.coeff_cutoff();
  for (; n <= 100000; ++n) {
    if (n > cutoff) break;
    const double weight = p.family.pmf(p.theta, n);
    const double x = n * p.ew.alpha;  // exponent of G in F's n-th term
    const bool integral_x = std::fabs(x - std::nearbyint(x)) < 1e-9;
    long double sk = 0.0L;
    long double bk = 1.0L;  // C(nα, k) magnitude with alternating sign folded in
    for (long k = 1; k <= 4000; ++k) {
      bk *= (static_cast<long double>(k - 1) - x) / k;  // now (-1)^k C(x, k)
      const double term = static_cast<double>(bk) * std::exp(-inv_g * std::log(k)) *
                          lower_incomplete_gamma(inv_g, k * wt);
      sk += term;
      if (integral_x && k >= static_cast<long>(std::nearbyint(x))) break;
      if (!integral_x && k > 32 && std::fabs(term) < 1e-13 * std::fabs(static_cast<double>(sk)) &&
          k > x)
        break;
      if (k == 4000) throw convergence_error("cdf_integral series: inner sum stalled", k, term);
    }
    const double term_n = weight * static_cast<double>(sk);
    acc += term_n;
    last = term_n;
    if (n >= 8 && std::fabs(term_n) < 1e-13 * std::fabs(static_cast<double>(acc) + 1e-300)) break;
  }
  if (n > 100000) throw convergence_error("cdf_integral series: outer sum stalled", n, last);
  return t + static_cast<double>(acc) / (p.ew.gamma * p.ew.beta);
}

/// Mean residual life m(t) = (μ_1 + I(t) - t)/S(t).
inline double mean_residual_life(const EwpsParams& p, double t) {
  if (t < 0) throw domain_error("mean_residual_life: t must be nonnegative");
  const double mu1 = ewps_moment_quadrature(p, 1);
  if (t == 0) return mu1;
  const double S = ewps_survival(p, t);
  if (!(S > detail::kMinConditioningMass))
    throw overflow_error("mean_residual_life: survival at t is numerically zero");
  return (mu1 + cdf_integral(p, t) - t) / S;
}

/// r-th reversed residual moment E[(t-Y)^r | Y <= t] by quadrature.
inline double reversed_residual_moment(const EwpsParams& p, double t, int r) {
  if (!(t > 0)) throw domain_error("reversed_residual_moment: t must be positive");
  if (r < 1) throw domain_error("reversed_residual_moment: r must be >= 1");
  const double F = ewps_cdf(p, t);
  if (!(F > detail::kMinConditioningMass))
    throw domain_error("reversed_residual_moment: F(t) is numerically zero");
  const double u_hi = std::pow(p.ew.beta * t, p.ew.gamma);
  const double num = ewps_expect(
      p, [&](double y) { return y < t ? std::pow(t - y, r) : 0.0; }, 0.0, u_hi, 1e-10);
  return num / F;
}

/// §8-style series for the reversed residual moment (lower incomplete gamma).
inline double reversed_residual_moment_series(const EwpsParams& p, double t, int r) {
  if (!(t > 0)) throw domain_error("reversed_residual_moment: t must be positive");
  if (r < 1) throw domain_error("reversed_residual_moment: r must be >= 1");
  const double F = ewps_cdf(p, t);
  if (!(F > detail::kMinConditioningMass))
    throw domain_error("reversed_residual_moment: F(t) is numerically zero");
  const double wt = std::pow(p.ew.beta * t, p.ew.gamma);
  long double acc = 0.0L;
  for (int i = 0; i <= r; ++i) {
    const double pw = 1.0 + i / p.ew.gamma;
    const double lchoose =
        std::lgamma(r + 1.0) - std::lgamma(i + 1.0) - std::lgamma(r - i + 1.0);
    const double outer =
        std::exp(lchoose + (r - i) * std::log(t)) * ((i % 2 == 0) ? 1.0 : -1.0);
    long double sum_n = 0.0L;
    double last = 0.0;
    int n = 1;
    const int cutoff = p.family.coeff_cutoff();
    for (; n <= 100000; ++n) {
      if (n > cutoff) break;
      const double weight = n * p.family.pmf(p.theta, n);
      long double sj = 0.0L;
      long double bj = 1.0L;
      const double x = n * p.ew.alpha - 1.0;
      const bool integral_x = x >= 0 && std::fabs(x - std::nearbyint(x)) < 1e-9;
      for (long j = 0; j <= 4000; ++j) {
        const double term = static_cast<double>(bj) * std::exp(-pw * std::log(j + 1.0)) *
                            lower_incomplete_gamma(pw, (j + 1.0) * wt);
        sj += term;
        if (integral_x && j >= static_cast<long>(std::nearbyint(x))) break;
        if (!integral_x && j > 32 && std::fabs(term) < 1e-13 * std::fabs(static_cast<double>(sj)) &&
            j > x)
          break;
        if (j == 4000)
          throw convergence_error("reversed_residual series: inner sum stalled", j, term);
        bj *= (static_cast<long double>(j) - x) / (j + 1.0L);
      }
      const double term_n = weight * static_cast<double>(sj);
      sum_n += term_n;
      last = term_n;
      if (n >= 8 && std::fabs(term_n) < 1e-13 * std::fabs(static_cast<double>(sum_n))) break;
    }
    if (n > 100000)
      throw convergence_error("reversed_residual series: outer sum stalled", n, last);
    acc += outer * std::pow(p.ew.beta, -static_cast<double>(i)) * static_cast<double>(sum_n);
  }
  return p.ew.alpha * static_cast<double>(acc) / F;
}

/// Probability weighted moment τ_{s,r} = E[Y^s F(Y)^r] by quadrature.
inline double pwm(const EwpsParams& p, int s, int r) {
  if (s < 1 || r < 0) throw domain_error("pwm: require s >= 1, r >= 0");
  return ewps_expect(
      p,
      [&](double y) {
        double h = std::pow(y, s);
        if (r > 0) h *= std::pow(ewps_cdf(p, y), r);
        return h;
      },
      1e-10);
}

/// Thm.-2 triple series for the PWM, with the coefficients of C'(u)·C(u)^r
/// generated through the c_{i,j} recurrence. r = 0 reduces to the moment
/// series exactly.
inline double pwm_series(const EwpsParams& p, int s, int r) {
  if (s < 1 || r < 0) throw domain_error("pwm: require s >= 1, r >= 0");
  const double pw = 1.0 + s / p.ew.gamma;
  const double eps_ld = 1.1e-19;
  int K = 128;
  for (;;) {
    const std::vector<double> a = p.family.coefficients(K + 1);
    // C(u)^r = u^r Σ_e c_e u^e with c from the recurrence on w_i = a_{i+1}
    const std::vector<double> c =
        power_coeffs(a, static_cast<double>(r), static_cast<std::size_t>(K));
    long double acc = 0.0L;
    long double err_est = 0.0L;
    bool tail_ok = false;
    double last = 0.0;
    for (int k = r; k <= K; ++k) {
      // p_k = Σ_{e=0}^{k-r} (k-r-e+1) a_{k-r-e+1} c_e  (C' convolved with C^r)
      double pk = 0.0;
      for (int e = 0; e <= k - r; ++e) {
        const int d = k - r - e;  // degree in C'
        pk += (d + 1.0) * a[d] * c[e];
      }
      if (pk == 0.0) continue;
      const auto inner = detail::alt_binom_sum(p.ew.alpha * (k + 1.0) - 1.0, pw);
      if (!inner.converged)
        throw convergence_error("pwm series: inner binomial sum stalled", inner.terms,
                                inner.value);
      const double term =
          pk * std::exp((k + 1.0) * std::log(p.theta) - (r + 1.0) * p.family.log_c(p.theta)) *
          inner.value;
      acc += term;
      err_est += std::fabs(pk * std::exp((k + 1.0) * std::log(p.theta) -
                                         (r + 1.0) * p.family.log_c(p.theta))) *
                 inner.max_term * eps_ld * inner.terms;
      last = term;
      if (k - r > 16 && std::fabs(term) < 1e-13 * std::fabs(static_cast<double>(acc))) {
        tail_ok = true;
        break;
      }
    }
    if (tail_ok || K >= p.family.coeff_cutoff()) {
      if (err_est > 1e-7 * std::fabs(acc))
        throw convergence_error("pwm series: alternating cancellation exceeds tolerance", K,
                                static_cast<double>(err_est));
      return p.ew.alpha * std::tgamma(pw) * std::pow(p.ew.beta, -s) * static_cast<double>(acc);
    }
    K *= 2;
    if (K > 8192) throw convergence_error("pwm series: tail rule not met", K, last);
  }
}

/// L(b) = ∫_b^∞ y f(y) dy by quadrature.
inline double tail_mean_integral(const EwpsParams& p, double b) {
  if (b < 0) throw domain_error("tail_mean_integral: b must be nonnegative");
  const double u_lo = b == 0 ? 0.0 : std::pow(p.ew.beta * b, p.ew.gamma);
  return ewps_expect(p, [&](double y) { return y > b ? y : 0.0; }, u_lo,
                     detail::ewps_tail_cap(p), 1e-10);
}

/// Incomplete-gamma series for L(b): αβ^{-1} Σ_n Σ_j (-1)^j n P(N=n)
/// C(nα-1, j) (j+1)^{-(1/γ+1)} Φ(1/γ+1; (j+1)(βb)^γ).
inline double tail_mean_integral_series(const EwpsParams& p, double b) {
  if (!(b > 0)) throw domain_error("tail_mean_integral_series: b must be positive");
  const double wb = std::pow(p.ew.beta * b, p.ew.gamma);
  const double pw = 1.0 / p.ew.gamma + 1.0;
  long double acc = 0.0L;
  double last = 0.0;
  int n = 1;
  const int cutoff = p.family.coeff_cutoff();
  for (; n <= 100000; ++n) {
    if (n > cutoff) break;
    const double weight = n * p.family.pmf(p.theta, n);
    long double sj = 0.0L;
    long double bj = 1.0L;
    const double x = n * p.ew.alpha - 1.0;
    const bool integral_x = x >= 0 && std::fabs(x - std::nearbyint(x)) < 1e-9;
    for (long j = 0; j <= 4000; ++j) {
      const double term = static_cast<double>(bj) * std::exp(-pw * std::log(j + 1.0)) *
                          upper_incomplete_gamma(pw, (j + 1.0) * wb);
      sj += term;
      if (integral_x && j >= static_cast<long>(std::nearbyint(x))) break;
      if (!integral_x && j > 32 && std::fabs(term) < 1e-13 * std::fabs(static_cast<double>(sj)) &&
          j > x)
        break;
      if (j == 4000)
        throw convergence_error("tail_mean_integral series: inner sum stalled", j, term);
      bj *= (static_cast<long double>(j) - x) / (j + 1.0L);
    }
    const double term_n = weight * static_cast<double>(sj);
    acc += term_n;
    last = term_n;
    if (n >= 8 && std::fabs(term_n) < 1e-13 * std::fabs(static_cast<double>(acc))) break;
  }
  if (n > 100000)
    throw convergence_error("tail_mean_integral series: outer sum stalled", n, last);
  return p.ew.alpha * static_cast<double>(acc) / p.ew.beta;
}

/// Mean deviations about the mean and the median:
/// δ1 = 2μF(μ) - 2μ + 2L(μ), δ2 = 2L(M) - μ with M the median.
inline std::pair<double, double> mean_deviations(const EwpsParams& p) {
  const double mu = ewps_moment_quadrature(p, 1);
  const double med = ewps_quantile(p, 0.5);
  const double d1 = 2.0 * mu * ewps_cdf(p, mu) - 2.0 * mu + 2.0 * tail_mean_integral(p, mu);
  const double d2 = 2.0 * tail_mean_integral(p, med) - mu;
  return {d1, d2};
}

struct InequalityCurves {
  double bonferroni;  // B_F[F(x)]
  double lorenz;      // L_F[F(x)]
  double ttt;         // scaled total time on test S_F[F(x)]
  double gini;        // 1 - ∫ S_F[F(t)] f(t) dt
};

/// Bonferroni/Lorenz/TTT values at x plus the (x-independent) Gini index.
/// The Gini inner integral is evaluated by nested quadrature (outer 1e-6).
inline InequalityCurves inequality_curves(const EwpsParams& p, double x) {
  if (!(x > 0)) throw domain_error("inequality_curves: x must be positive");
  const double mu = ewps_moment_quadrature(p, 1);
  const double F = ewps_cdf(p, x);
  if (!(F > 0)) throw domain_error("inequality_curves: F(x) is numerically zero");
  const double Lx = ewps_expect(p, [&](double y) { return y < x ? y : 0.0; }, 0.0,
                                std::pow(p.ew.beta * x, p.ew.gamma), 1e-10);
  const auto scaled_ttt = [&](double t) {
    return integrate_or_throw([&](double u) { return ewps_survival(p, u); }, 0.0, t, 1e-8, 0.0,
                              "inequality_curves: TTT quadrature failed") /
           mu;
  };
  const double cf = ewps_expect(p, scaled_ttt, 0.0, detail::ewps_tail_cap(p), 1e-6);
  return {Lx / (mu * F), Lx / mu, scaled_ttt(x), 1.0 - cf};
}

}  // namespace ewps

#endif  // EWPS_ANALYTICS_HPP

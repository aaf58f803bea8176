// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// The compound law of Y = max(X_1,...,X_N): X_i iid exponentiated Weibull and
// N a zero-truncated power-series variable, giving the marginal cdf
// F(y) = C(θ G(y)) / C(θ) with G the EW cdf. The min-compounded companion
// (Weibull-power-series style) is exposed through its cdf only.
//
// Moments and the mgf have two routes: adaptive quadrature under the
// substitution u = (βy)^γ (authoritative; the pdf-weighted integrand becomes
// αθ e^{-u} (1-e^{-u})^{α-1} C'(θ(1-e^{-u})^α)/C(θ) du), and the compact
// double/triple series built from generalized binomial sums (cross-checks:
// they alternate and can cancel catastrophically for large nα, so they carry
// explicit convergence diagnostics instead of silently degrading).

#ifndef EWPS_EWPS_HPP
#define EWPS_EWPS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "ewps/errors.hpp"
#include "ewps/ew.hpp"
#include "ewps/power_series.hpp"
#include "ewps/quadrature.hpp"
#include "ewps/rng.hpp"
#include "ewps/special.hpp"

namespace ewps {

struct EwpsParams {
  EwParams ew;
  PowerSeries family;
  double theta;

  EwpsParams(EwParams e, PowerSeries f, double th) : ew(e), family(std::move(f)), theta(th) {
    family.check_theta(theta);
  }
};

/// The value v = G(y) = (1-e^{-(βy)^γ})^α cached together with its complement
/// and logarithm; every distribution formula consumes these three.
struct GTransform {
  double g;            // G(y) ∈ [0,1]
  double one_minus_g;  // 1 - G(y) without cancellation
  double log_g;        // log G(y)
};

inline GTransform g_transform(const EwParams& p, double y) {
  const double w = std::pow(p.beta * y, p.gamma);
  const double lg = p.alpha * log1mexp(w);
  return {std::exp(lg), -std::expm1(lg), lg};
}

inline double ewps_cdf(const EwpsParams& p, double y) {
  if (y < 0 || std::isnan(y)) throw domain_error("ewps_cdf: y must be nonnegative");
  if (y == 0) return 0.0;
  if (y == std::numeric_limits<double>::infinity()) return 1.0;
  return p.family.cdf_ratio(p.theta, g_transform(p.ew, y).g);
}

inline double ewps_log_pdf(const EwpsParams& p, double y) {
  if (!(y > 0) || !std::isfinite(y)) throw domain_error("ewps_pdf: y must be positive");
  const double w = std::pow(p.ew.beta * y, p.ew.gamma);
  const double lg1 = log1mexp(w);  // log(1 - e^{-w})
  const double v = std::exp(p.ew.alpha * lg1);
  return std::log(p.theta) + std::log(p.ew.alpha) + std::log(p.ew.gamma) +
         p.ew.gamma * std::log(p.ew.beta) + (p.ew.gamma - 1.0) * std::log(y) - w +
         (p.ew.alpha - 1.0) * lg1 + p.family.log_cprime(p.theta * v) - p.family.log_c(p.theta);
}

inline double ewps_pdf(const EwpsParams& p, double y) { return std::exp(ewps_log_pdf(p, y)); }

inline double ewps_survival(const EwpsParams& p, double y) {
  if (y < 0 || std::isnan(y)) throw domain_error("ewps_survival: y must be nonnegative");
  if (y == 0) return 1.0;
  const GTransform g = g_transform(p.ew, y);
  return p.family.survival_ratio(p.theta, g.g, g.one_minus_g);
}

/// (survival, hazard); the hazard equals pdf/survival identically.
inline std::pair<double, double> ewps_survival_hazard(const EwpsParams& p, double y) {
  if (!(y > 0)) throw domain_error("ewps_survival_hazard: y must be positive");
  const double s = ewps_survival(p, y);
  if (!(s > 0)) throw overflow_error("ewps_survival_hazard: survival underflowed to zero");
  return {s, ewps_pdf(p, y) / s};
}

/// y_q = G^{-1}(C^{-1}(q C(θ))/θ); the median is the q = 1/2 case.
inline double ewps_quantile(const EwpsParams& p, double q) {
  if (!(q > 0 && q < 1)) throw domain_error("ewps_quantile: q must lie in (0,1)");
  const double v = p.family.quantile_core(p.theta, q);  // target for G(y)
  const double t = -std::log1p(-std::exp(std::log(v) / p.ew.alpha));
  return std::exp(std::log(t) / p.ew.gamma) / p.ew.beta;
}

enum class SampleMethod { inverse, compound };

/// n draws; `inverse` applies the quantile to uniforms, `compound` draws N
/// from the power-series pmf and takes the max of N EW draws. Both sample the
/// same law; results are reproducible from the stream's seed.
inline std::vector<double> ewps_sample(const EwpsParams& p, UniformStream& stream, std::size_t n,
                                       SampleMethod method = SampleMethod::inverse) {
  std::vector<double> out(n);
  if (method == SampleMethod::inverse) {
    for (auto& v : out) v = ewps_quantile(p, stream.next());
    return out;
  }
  for (auto& v : out) {
    const int count = p.family.sample(p.theta, stream);
    double best = 0.0;
    for (int j = 0; j < count; ++j) best = std::max(best, ew_quantile(p.ew, stream.next()));
    v = best;
  }
  return out;
}

namespace detail {

inline double ewps_tail_cap(const EwpsParams&) { return 150.0; }

}  // namespace detail

/// ∫ h(y) f(y) dy over y with u = (βy)^γ, then z = u^α; u_lo/u_hi are in the
/// u variable. The second substitution cancels the u^{α-1} endpoint
/// singularity exactly (the log-space Jacobian term (1/α-1)·log z offsets the
/// (α-1)·log(1-e^{-u}) term as u → 0), so the integrand is bounded for every
/// shape.
template <class H>
double ewps_expect(const EwpsParams& p, H&& h, double u_lo, double u_hi, double rel_tol = 1e-10) {
  const double alpha = p.ew.alpha;
  const double la = std::log(alpha * p.theta) - p.family.log_c(p.theta) - std::log(alpha);
  const double inv_gamma = 1.0 / p.ew.gamma;
  const auto integrand = [&](double z) -> double {
    if (z <= 0) return 0.0;
    const double lu = std::log(z) / alpha;
    const double u = std::exp(lu);
    if (u == 0.0) return 0.0;  // unreachable before the subdivision floor
    const double lg1 = log1mexp(u);
    const double v = std::exp(alpha * lg1);
    // (α-1)·log(1-e^{-u}) plus the Jacobian (1/α-1)·log z, combined stably
    const double lw = la - u + (alpha - 1.0) * (lg1 - lu) +
                      p.family.log_cprime(p.theta * v);
    const double y = std::exp(inv_gamma * lu) / p.ew.beta;
    return h(y) * std::exp(lw);
  };
  const double z_lo = u_lo <= 0 ? 0.0 : std::pow(u_lo, alpha);
  const double z_hi = std::pow(u_hi, alpha);
  return integrate_or_throw(integrand, z_lo, z_hi, rel_tol, 0.0,
                            "ewps_expect: quadrature failed");
}

template <class H>
double ewps_expect(const EwpsParams& p, H&& h, double rel_tol = 1e-10) {
  return ewps_expect(p, std::forward<H>(h), 0.0, detail::ewps_tail_cap(p), rel_tol);
}

enum class MomentMethod { series, quadrature };

/// Double-series route for E[Y^k]: α β^{-k} Γ(k/γ+1) Σ_n n P(N=n) A(nα-1),
/// with A the alternating generalized-binomial sum. Throws convergence_error
/// with (terms reached, last term) when the tail rule cannot be met or the
/// alternating cancellation exhausts long-double precision.
inline double ewps_moment_series(const EwpsParams& p, int k) {
  if (k < 1) throw domain_error("ewps_moment: k must be >= 1");
  const double pw = k / p.ew.gamma + 1.0;
  const int cutoff = p.family.coeff_cutoff();
  detail::NoisyTailSum sum("ewps_moment series");
  long n = 1;
  for (; n <= 200000; ++n) {
    if (n > cutoff) break;
    const double weight = n * p.family.pmf(p.theta, static_cast<int>(n));
    const auto inner = detail::alt_binom_sum(n * p.ew.alpha - 1.0, pw);
    const double err =
        inner.converged ? inner.max_term * 1.1e-19 : std::numeric_limits<double>::infinity();
    if (sum.add(n, weight * inner.value, std::fabs(weight) * err)) break;
  }
  if (n > 200000)
    throw convergence_error("ewps_moment series: outer sum did not meet the tail rule", n, 0.0);
  return p.ew.alpha * std::pow(p.ew.beta, -k) * std::tgamma(pw) * sum.total();
}

inline double ewps_moment_quadrature(const EwpsParams& p, int k, double rel_tol = 1e-10) {
  if (k < 1) throw domain_error("ewps_moment: k must be >= 1");
  return ewps_expect(p, [k](double y) { return std::pow(y, k); }, rel_tol);
}

inline double ewps_moment(const EwpsParams& p, int k,
                          MomentMethod method = MomentMethod::quadrature) {
  return method == MomentMethod::series ? ewps_moment_series(p, k)
                                        : ewps_moment_quadrature(p, k);
}

/// (mean, variance); variance is the second raw moment minus the squared mean.
inline std::pair<double, double> ewps_mean_var(const EwpsParams& p) {
  const double m1 = ewps_moment_quadrature(p, 1);
  const double m2 = ewps_moment_quadrature(p, 2);
  return {m1, m2 - m1 * m1};
}

/// Moment generating function by quadrature of e^{ty} f(y). For t > 0 the mgf
/// exists only when γ > 1, or γ = 1 with t < β.
inline double ewps_mgf(const EwpsParams& p, double t) {
  if (t == 0) return 1.0;
  if (t > 0) {
    if (p.ew.gamma < 1.0)
      throw domain_error("ewps_mgf: mgf does not exist for t > 0 with gamma < 1");
    if (p.ew.gamma == 1.0 && t >= p.ew.beta)
      throw domain_error("ewps_mgf: mgf requires t < beta when gamma = 1");
  }
  double cap = detail::ewps_tail_cap(p);
  if (t > 0 && p.ew.gamma > 1.0) {
    // ensure e^{t·y(u)} is dominated by e^{-u} well before the cap
    const double star =
        std::pow(2.0 * t / p.ew.beta, p.ew.gamma / (p.ew.gamma - 1.0));
    cap = std::max(cap, 2.0 * star + 100.0);
  } else if (t > 0) {
    cap = std::max(cap, 150.0 / (1.0 - t / p.ew.beta));
  }
  return ewps_expect(p, [t](double y) { return std::exp(t * y); }, 0.0, cap, 1e-10);
}

/// Triple-series route for the mgf, Σ_i t^i E[Y^i]/i! with E[Y^i] from the
/// moment series and general weights a_n θ^n/C(θ). Diverges for γ < 1 (the
/// term ratio grows like Γ(i/γ+1)/i!), which is reported as convergence_error.
inline double ewps_mgf_series(const EwpsParams& p, double t) {
  if (t == 0) return 1.0;
  long double acc = 1.0L;  // i = 0 term
  double last = 1.0;
  int grew = 0;
  double prev_mag = 1.0;
  for (int i = 1; i <= 400; ++i) {
    const double mom = ewps_moment_series(p, i);
    const double term = std::exp(i * std::log(std::fabs(t)) - std::lgamma(i + 1.0)) * mom *
                        (t < 0 && i % 2 == 1 ? -1.0 : 1.0);
    acc += term;
    last = term;
    const double mag = std::fabs(term);
    if (i >= 8 && mag < 1e-14 * std::fabs(static_cast<double>(acc)))
      return static_cast<double>(acc);
    grew = mag > prev_mag ? grew + 1 : 0;
    if (i >= 16 && grew >= 8)
      throw convergence_error("ewps_mgf series: terms diverge (series radius exceeded)", i, last);
    prev_mag = mag;
  }
  throw convergence_error("ewps_mgf series: tail rule not met", 400, last);
}

/// Prop.-2 mixture: θ Σ_{n=1}^{n_max} (θ^{n-1} a_n/C(θ)) g_EW(y; nα, β, γ),
/// i.e. Σ P(N=n) times the density of the largest of n EW draws. Converges to
/// the pdf as n_max grows.
inline double mixture_pdf(const EwpsParams& p, double y, int n_max) {
  if (n_max < 1) throw domain_error("mixture_pdf: n_max must be >= 1");
  if (!(y > 0)) throw domain_error("mixture_pdf: y must be positive");
  const int cutoff = std::min(n_max, p.family.coeff_cutoff());
  double acc = 0.0;
  for (int n = 1; n <= cutoff; ++n) {
    const double w = p.family.pmf(p.theta, n);
    if (w == 0.0) continue;
    acc += w * ew_pdf(EwParams(n * p.ew.alpha, p.ew.beta, p.ew.gamma), y);
  }
  return acc;
}

/// cdf of the min-compounded variant Y = min(X_1,...,X_N):
/// 1 - C(θ(1 - G(y)))/C(θ). Reduces to the EG/EP/EL/WG families for α = 1
/// (and γ = 1 where applicable).
inline double ewps_cdf_min(const EwpsParams& p, double y) {
  if (y < 0 || std::isnan(y)) throw domain_error("ewps_cdf_min: y must be nonnegative");
  if (y == 0) return 0.0;
  const GTransform g = g_transform(p.ew, y);
  // 1 - C(θ·(1-g))/C(θ) is the survival_ratio evaluated at v = 1-g
  return p.family.survival_ratio(p.theta, g.one_minus_g, g.g);
}

}  // namespace ewps

#endif  // EWPS_EWPS_HPP

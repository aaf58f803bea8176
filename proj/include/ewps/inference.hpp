// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Likelihood machinery for the compound model: the observed-data
// log-likelihood, its analytic score and 4×4 observed information matrix,
// direct maximum likelihood (BFGS over log/logit-transformed parameters with
// a Newton polish), the latent-count EM algorithm, and asymptotic confidence
// intervals. The exponentiated-Weibull (α,β,γ) and Weibull (β,γ) comparison
// models reuse the same derivative code through the m = 1 binomial family,
// whose compounding layer is exactly the identity.
//
// Derivative conventions per observation, with w = (βy)^γ, E = e^{-w},
// G = 1-E, L = log G, D = E/G, v = G^α, u = θv, T = C''(u)/C'(u),
// V = C'''(u)/C'(u), P = T + u(V - T²):
//   ∂w/∂β = γw/β, ∂w/∂γ = w·log(βy), ∂(log C'(u))/∂x = T·∂u/∂x,
//   ∂T/∂x = (V - T²)·∂u/∂x.
// The printed forms of these second derivatives in the literature drop a few
// factors; everything here is validated against finite differences.

#ifndef EWPS_INFERENCE_HPP
#define EWPS_INFERENCE_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewps/dataset.hpp"
#include "ewps/errors.hpp"
#include "ewps/ewps.hpp"
#include "ewps/optim.hpp"
#include "ewps/power_series.hpp"
#include "ewps/special.hpp"

namespace ewps {

/// (α, β, γ, θ) in the paper's ordering.
using ParamVector = std::array<double, 4>;

namespace detail {

inline void check_params(const ParamVector& th, const PowerSeries& fam) {
  if (!(th[0] > 0) || !(th[1] > 0) || !(th[2] > 0) || !std::isfinite(th[0]) ||
      !std::isfinite(th[1]) || !std::isfinite(th[2]))
    throw domain_error("parameters alpha, beta, gamma must be positive and finite");
  fam.check_theta(th[3]);
}

struct ObsCore {
  double ly;    // log y
  double w;     // (βy)^γ
  double E;     // e^{-w}
  double G;     // 1 - e^{-w}
  double L;     // log G
  double D;     // E/G
  double v;     // G^α
  double u;     // θ G^α
  double T;     // C''(u)/C'(u)
  double V;     // C'''(u)/C'(u)
};

inline bool obs_core(const ParamVector& th, const PowerSeries& fam, double y, ObsCore& o) {
  o.ly = std::log(y);
  const double lby = std::log(th[1]) + o.ly;
  o.w = std::exp(th[2] * lby);
  if (o.w == 0.0 || !std::isfinite(o.w)) return false;
  o.E = std::exp(-o.w);
  o.G = -std::expm1(-o.w);
  if (o.G <= 0.0) return false;
  o.L = log1mexp(o.w);
  o.D = o.E / o.G;
  o.v = std::exp(th[0] * o.L);
  o.u = th[3] * o.v;
  o.T = fam.cpp_over_cp(o.u);
  o.V = fam.cppp_over_cp(o.u);
  return true;
}

}  // namespace detail

/// Observed-data log-likelihood ℓ_n(Θ). Returns -inf (never a garbage value)
/// when the density underflows at some observation; parameter-domain
/// violations throw.
inline double log_likelihood(const Dataset& d, const ParamVector& th, const PowerSeries& fam) {
  detail::check_params(th, fam);
  const double alpha = th[0], beta = th[1], gamma = th[2], theta = th[3];
  const double n = static_cast<double>(d.size());
  double acc = 0.0;
  for (double y : d.values()) {
    const double w = std::exp(gamma * (std::log(beta) + std::log(y)));
    if (w == 0.0 || !std::isfinite(w)) return -std::numeric_limits<double>::infinity();
    const double L = log1mexp(w);
    const double u = theta * std::exp(alpha * L);
    acc += -w + (alpha - 1.0) * L + fam.log_cprime(u);
  }
  const double ll = n * (std::log(alpha) + std::log(gamma) + gamma * std::log(beta) +
                         std::log(theta)) +
                    (gamma - 1.0) * d.sum_log() - n * fam.log_c(theta) + acc;
  return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
}

/// Analytic score (∂ℓ/∂α, ∂ℓ/∂β, ∂ℓ/∂γ, ∂ℓ/∂θ).
inline Eigen::Vector4d score(const Dataset& d, const ParamVector& th, const PowerSeries& fam) {
  detail::check_params(th, fam);
  const double alpha = th[0], beta = th[1], gamma = th[2], theta = th[3];
  const double n = static_cast<double>(d.size());
  double sa = 0, sb = 0, sg = 0, st = 0;
  detail::ObsCore o;
  for (double y : d.values()) {
    if (!detail::obs_core(th, fam, y, o))
      throw domain_error("score: density underflows at an observation");
    const double lby = std::log(beta) + o.ly;
    const double wb = gamma * o.w / beta;
    const double wg = o.w * lby;
    sa += o.L + o.T * o.u * o.L;
    sb += -wb + (alpha - 1.0) * o.D * wb + o.T * alpha * o.u * o.D * wb;
    sg += -wg + (alpha - 1.0) * o.D * wg + o.T * alpha * o.u * o.D * wg;
    st += o.T * o.v;
  }
  Eigen::Vector4d s;
  s[0] = n / alpha + sa;
  s[1] = n * gamma / beta + sb;
  s[2] = n / gamma + n * std::log(beta) + d.sum_log() + sg;
  s[3] = n / theta + st - n * fam.c(theta, 1) / fam.c(theta, 0);
  return s;
}

/// Observed information I_n(Θ) = -∂²ℓ/∂Θ², assembled from the ten distinct
/// analytic elements; symmetric by construction.
inline Eigen::Matrix4d observed_information(const Dataset& d, const ParamVector& th,
                                            const PowerSeries& fam) {
  detail::check_params(th, fam);
  const double alpha = th[0], beta = th[1], gamma = th[2], theta = th[3];
  const double n = static_cast<double>(d.size());
  double haa = 0, hab = 0, hag = 0, hat = 0, hbb = 0, hbg = 0, hgg = 0, hbt = 0, hgt = 0,
         htt = 0;
  detail::ObsCore o;
  for (double y : d.values()) {
    if (!detail::obs_core(th, fam, y, o))
      throw domain_error("observed_information: density underflows at an observation");
    const double lby = std::log(beta) + o.ly;
    const double wb = gamma * o.w / beta;
    const double wg = o.w * lby;
    const double wbb = gamma * (gamma - 1.0) * o.w / (beta * beta);
    const double wgg = o.w * lby * lby;
    const double wbg = (o.w / beta) * (1.0 + gamma * lby);
    const double EG2 = o.D / o.G;  // E/G²
    const double VT = o.V - o.T * o.T;
    const double P = o.T + o.u * VT;

    haa += o.u * o.L * o.L * P;
    hab += o.D * wb * (1.0 + o.T * o.u + alpha * o.L * o.u * P);
    hag += o.D * wg * (1.0 + o.T * o.u + alpha * o.L * o.u * P);
    hat += o.v * o.L * P;

    const double common_bb =
        VT * alpha * alpha * o.u * o.u * o.D * o.D * wb * wb +
        o.T * alpha * (alpha * o.u * o.D * o.D * wb * wb - o.u * EG2 * wb * wb + o.u * o.D * wbb);
    hbb += -wbb + (alpha - 1.0) * (o.D * wbb - EG2 * wb * wb) + common_bb;

    const double common_bg =
        VT * alpha * alpha * o.u * o.u * o.D * o.D * wb * wg +
        o.T * alpha * (alpha * o.u * o.D * o.D * wb * wg - o.u * EG2 * wb * wg + o.u * o.D * wbg);
    hbg += -wbg + (alpha - 1.0) * (o.D * wbg - EG2 * wb * wg) + common_bg;

    const double common_gg =
        VT * alpha * alpha * o.u * o.u * o.D * o.D * wg * wg +
        o.T * alpha * (alpha * o.u * o.D * o.D * wg * wg - o.u * EG2 * wg * wg + o.u * o.D * wgg);
    hgg += -wgg + (alpha - 1.0) * (o.D * wgg - EG2 * wg * wg) + common_gg;

    hbt += alpha * o.v * o.D * wb * P;
    hgt += alpha * o.v * o.D * wg * P;
    htt += o.v * o.v * VT;
  }
  const double c0 = fam.c(theta, 0), c1 = fam.c(theta, 1), c2 = fam.c(theta, 2);
  Eigen::Matrix4d H;
  H(0, 0) = -n / (alpha * alpha) + haa;
  H(0, 1) = H(1, 0) = hab;
  H(0, 2) = H(2, 0) = hag;
  H(0, 3) = H(3, 0) = hat;
  H(1, 1) = -n * gamma / (beta * beta) + hbb;
  H(1, 2) = H(2, 1) = n / beta + hbg;
  H(1, 3) = H(3, 1) = hbt;
  H(2, 2) = -n / (gamma * gamma) + hgg;
  H(2, 3) = H(3, 2) = hgt;
  H(3, 3) = -n / (theta * theta) + htt - n * (c2 / c0 - (c1 / c0) * (c1 / c0));
  return -H;
}

/// E[Z_i | y_i] = 1 + θG_i^α C''(θG_i^α)/C'(θG_i^α); every entry is >= 1.
inline std::vector<double> em_expected_z(const Dataset& d, const ParamVector& th,
                                         const PowerSeries& fam) {
  detail::check_params(th, fam);
  std::vector<double> z(d.size());
  detail::ObsCore o;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!detail::obs_core(th, fam, d.values()[i], o))
      throw domain_error("em_expected_z: density underflows at an observation");
    z[i] = 1.0 + o.u * o.T;
  }
  return z;
}

struct FitResult {
  std::vector<double> params;             // model-dependent arity (4, 3, or 2)
  std::vector<std::string> param_names;
  double loglik = -std::numeric_limits<double>::infinity();
  double neg2loglik = std::numeric_limits<double>::infinity();
  std::vector<double> std_errors;
  Eigen::MatrixXd cov;
  int iterations = 0;
  bool converged = false;
  double score_norm = std::numeric_limits<double>::infinity();
  std::string method;   // "direct" or "em"
  std::string message;  // diagnostics (non-PD information, iteration caps, ...)
};

namespace detail {

// log transform for α, β, γ and for θ of the unbounded families;
// logit for θ of the (0,1) families.
struct Transform4 {
  bool theta_logit;

  Eigen::Vector4d to_unc(const ParamVector& p) const {
    Eigen::Vector4d t;
    for (int i = 0; i < 3; ++i) t[i] = std::log(p[i]);
    t[3] = theta_logit ? std::log(p[3] / (1.0 - p[3])) : std::log(p[3]);
    return t;
  }
  ParamVector from_unc(const Eigen::Vector4d& t) const {
    ParamVector p;
    for (int i = 0; i < 3; ++i) p[i] = std::exp(t[i]);
    p[3] = theta_logit ? 1.0 / (1.0 + std::exp(-t[3])) : std::exp(t[3]);
    return p;
  }
  Eigen::Vector4d jacobian(const ParamVector& p) const {  // dΘ/dt, diagonal
    Eigen::Vector4d j;
    for (int i = 0; i < 3; ++i) j[i] = p[i];
    j[3] = theta_logit ? p[3] * (1.0 - p[3]) : p[3];
    return j;
  }
};

// Weibull probability-plot regression: log(-log(1-F̂)) on log y.
inline std::pair<double, double> weibull_plot_init(const Dataset& d) {
  const auto& ys = d.sorted();
  const double n = static_cast<double>(ys.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double F = (static_cast<double>(i) + 0.5) / n;
    const double x = std::log(ys[i]);
    const double z = std::log(-std::log1p(-F));
    sx += x;
    sy += z;
    sxx += x * x;
    sxy += x * z;
  }
  const double denom = n * sxx - sx * sx;
  double g = denom > 0 ? (n * sxy - sx * sy) / denom : 1.0;
  if (!(g > 0.05)) g = 0.05;
  if (!(g < 50.0)) g = 50.0;
  const double intercept = (sy - g * sx) / n;
  double b = std::exp(intercept / g);
  if (!(b > 0) || !std::isfinite(b)) b = 1.0 / d.mean();
  return {b, g};
}

// Deterministic multi-start schedule around a base point.
inline std::vector<ParamVector> start_points(const ParamVector& base, bool theta_bounded) {
  static const double mul[4][3] = {
      {2.0, 1.0, 1.25}, {0.5, 1.0, 0.8}, {4.0, 1.1, 1.6}, {1.0, 0.9, 0.55}};
  static const double theta_b[4] = {0.25, 0.75, 0.4, 0.6};
  static const double theta_u[4] = {0.4, 2.5, 1.5, 0.7};
  std::vector<ParamVector> out{base};
  for (int k = 0; k < 4; ++k) {
    ParamVector p = base;
    for (int i = 0; i < 3; ++i) p[i] = base[i] * mul[k][i];
    p[3] = theta_bounded ? theta_b[k] : base[3] * theta_u[k];
    out.push_back(p);
  }
  return out;
}

struct SubsetSpec {
  std::vector<int> active;  // indices into the 4-vector that are free
  ParamVector base;         // values for the inactive coordinates
};

// Shared fitting core: BFGS over transformed active coordinates, then a
// Newton polish on the original scale using the analytic information matrix.
inline FitResult fit_core(const Dataset& d, const PowerSeries& fam, const SubsetSpec& spec,
                          const std::vector<ParamVector>& starts,
                          const std::vector<std::string>& names, const std::string& method) {
  const bool theta_bounded = std::isfinite(fam.support_upper());
  const Transform4 tr{theta_bounded};
  const int k = static_cast<int>(spec.active.size());

  const auto pack = [&](const ParamVector& p) {
    Eigen::VectorXd t(k);
    const Eigen::Vector4d full = tr.to_unc(p);
    for (int i = 0; i < k; ++i) t[i] = full[spec.active[i]];
    return t;
  };
  const auto unpack = [&](const Eigen::VectorXd& t) {
    Eigen::Vector4d full = tr.to_unc(spec.base);
    for (int i = 0; i < k; ++i) full[spec.active[i]] = t[i];
    return tr.from_unc(full);
  };

  const auto objective = [&](const Eigen::VectorXd& t, Eigen::VectorXd& grad) -> double {
    const ParamVector p = unpack(t);
    for (double v : p)
      if (!std::isfinite(v) || v <= 0) return std::numeric_limits<double>::infinity();
    if (theta_bounded && p[3] >= 1.0) return std::numeric_limits<double>::infinity();
    double ll;
    Eigen::Vector4d sc;
    try {
      ll = log_likelihood(d, p, fam);
      if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
      sc = score(d, p, fam);
    } catch (const domain_error&) {
      return std::numeric_limits<double>::infinity();
    }
    const Eigen::Vector4d jac = tr.jacobian(p);
    for (int i = 0; i < k; ++i) grad[i] = -sc[spec.active[i]] * jac[spec.active[i]];
    return -ll;
  };

  FitResult best;
  best.method = method;
  best.param_names = names;
  ParamVector best_p = spec.base;
  int total_iters = 0;
  for (const ParamVector& s : starts) {
    Eigen::VectorXd t0;
    try {
      check_params(s, fam);
      t0 = pack(s);
    } catch (const domain_error&) {
      continue;
    }
    const OptimResult r = bfgs_minimize(objective, t0, 500, 1e-9);
    total_iters += r.iterations;
    if (!std::isfinite(r.f)) continue;
    const double ll = -r.f;
    if (ll > best.loglik) {
      best.loglik = ll;
      best_p = unpack(r.x);
    }
  }
  if (!std::isfinite(best.loglik)) {
    throw fit_error("fit failed: no start produced a finite likelihood",
                    {spec.base.begin(), spec.base.end()}, best.loglik);
  }

  // Newton polish on the original scale over the active block.
  ParamVector p = best_p;
  double ll = best.loglik;
  for (int it = 0; it < 40; ++it) {
    Eigen::Vector4d sc;
    Eigen::Matrix4d info;
    try {
      sc = score(d, p, fam);
      info = observed_information(d, p, fam);
    } catch (const domain_error&) {
      break;
    }
    Eigen::VectorXd g(k);
    Eigen::MatrixXd A(k, k);
    for (int i = 0; i < k; ++i) {
      g[i] = sc[spec.active[i]];
      for (int j = 0; j < k; ++j) A(i, j) = info(spec.active[i], spec.active[j]);
    }
    if (g.lpNorm<Eigen::Infinity>() < 1e-9) break;
    const Eigen::VectorXd step = A.fullPivLu().solve(g);
    if (!step.allFinite()) break;
    double lam = 1.0;
    bool moved = false;
    for (int h = 0; h < 50; ++h) {
      ParamVector pn = p;
      bool valid = true;
      for (int i = 0; i < k; ++i) {
        pn[spec.active[i]] = p[spec.active[i]] + lam * step[i];
        if (!(pn[spec.active[i]] > 0)) valid = false;
      }
      if (valid && theta_bounded && pn[3] >= 1.0) valid = false;
      if (valid) {
        double lln;
        try {
          lln = log_likelihood(d, pn, fam);
        } catch (const domain_error&) {
          lln = -std::numeric_limits<double>::infinity();
        }
        if (std::isfinite(lln) && lln >= ll - 1e-10) {
          p = pn;
          ll = lln;
          moved = true;
          break;
        }
      }
      lam *= 0.5;
    }
    ++total_iters;
    if (!moved) break;
  }

  best.loglik = ll;
  best.neg2loglik = -2.0 * ll;
  best.iterations = total_iters;
  best.params.resize(k);
  for (int i = 0; i < k; ++i) best.params[i] = p[spec.active[i]];

  Eigen::Vector4d sc = Eigen::Vector4d::Zero();
  Eigen::Matrix4d info = Eigen::Matrix4d::Zero();
  bool deriv_ok = true;
  try {
    sc = score(d, p, fam);
    info = observed_information(d, p, fam);
  } catch (const domain_error&) {
    deriv_ok = false;
  }
  double snorm = std::numeric_limits<double>::infinity();
  if (deriv_ok) {
    snorm = 0.0;
    for (int i = 0; i < k; ++i) snorm = std::max(snorm, std::fabs(sc[spec.active[i]]));
  }
  best.score_norm = snorm;

  Eigen::MatrixXd A(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) A(i, j) = info(spec.active[i], spec.active[j]);
  const Eigen::LLT<Eigen::MatrixXd> llt(A);
  const bool pos_def = deriv_ok && llt.info() == Eigen::Success;
  if (pos_def) {
    best.cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
    best.std_errors.resize(k);
    for (int i = 0; i < k; ++i)
      best.std_errors[i] = best.cov(i, i) > 0 ? std::sqrt(best.cov(i, i)) : 0.0;
    const Eigen::VectorXd ev = A.selfadjointView<Eigen::Lower>().eigenvalues();
    if (ev.minCoeff() < 1e-10 * ev.maxCoeff())
      best.message += "information matrix is near-singular; ";
  } else {
    best.message += "information matrix is not positive definite; ";
  }
  best.converged = pos_def && snorm < 1e-6;
  return best;
}

}  // namespace detail

/// Direct MLE for the four-parameter compound model. With no explicit init,
/// a Weibull-probability-plot start plus four deterministic perturbations are
/// tried and the best log-likelihood kept.
inline FitResult mle_fit(const Dataset& d, const PowerSeries& fam,
                         std::optional<ParamVector> init = std::nullopt) {
  if (d.size() < 5) throw fit_error("mle_fit: need at least 5 observations", {}, 0.0);
  detail::SubsetSpec spec{{0, 1, 2, 3}, {1.0, 1.0, 1.0, 0.5}};
  std::vector<ParamVector> starts;
  if (init) {
    detail::check_params(*init, fam);
    starts.push_back(*init);
  } else {
    const auto [b0, g0] = detail::weibull_plot_init(d);
    const bool bounded = std::isfinite(fam.support_upper());
    const ParamVector base{1.0, b0, g0, bounded ? 0.5 : 1.0};
    starts = detail::start_points(base, bounded);
  }
  return detail::fit_core(d, fam, spec, starts, {"alpha", "beta", "gamma", "theta"}, "direct");
}

/// Exponentiated-Weibull (α, β, γ) comparison fit.
inline FitResult ew_fit(const Dataset& d) {
  if (d.size() < 5) throw fit_error("ew_fit: need at least 5 observations", {}, 0.0);
  const auto fam = PowerSeries::binomial(1);  // identity compounding
  detail::SubsetSpec spec{{0, 1, 2}, {1.0, 1.0, 1.0, 0.5}};
  const auto [b0, g0] = detail::weibull_plot_init(d);
  std::vector<ParamVector> starts = detail::start_points({1.0, b0, g0, 0.5}, false);
  for (auto& s : starts) s[3] = 0.5;
  return detail::fit_core(d, fam, spec, starts, {"alpha", "beta", "gamma"}, "direct");
}

/// Plain Weibull (β, γ) comparison fit.
inline FitResult weibull_fit(const Dataset& d) {
  if (d.size() < 5) throw fit_error("weibull_fit: need at least 5 observations", {}, 0.0);
  const auto fam = PowerSeries::binomial(1);
  detail::SubsetSpec spec{{1, 2}, {1.0, 1.0, 1.0, 0.5}};
  const auto [b0, g0] = detail::weibull_plot_init(d);
  std::vector<ParamVector> starts = detail::start_points({1.0, b0, g0, 0.5}, false);
  for (auto& s : starts) {
    s[0] = 1.0;
    s[3] = 0.5;
  }
  return detail::fit_core(d, fam, spec, starts, {"beta", "gamma"}, "direct");
}

/// EM fit: E-step via em_expected_z; M-step by sequential conditional
/// maximization of the complete-data objective (α closed form, θ by a
/// bracketed root of θC'(θ)/C(θ) = mean(z), β and γ by bracketed 1-D
/// maximization), which keeps the observed log-likelihood nondecreasing.
/// Stops when the max relative parameter change drops below tol.
inline FitResult em_fit(const Dataset& d, const PowerSeries& fam, const ParamVector& init,
                        int max_iter = 500, double tol = 1e-8,
                        std::vector<double>* loglik_trace = nullptr) {
  if (d.size() < 5) throw fit_error("em_fit: need at least 5 observations", {}, 0.0);
  detail::check_params(init, fam);
  const double n = static_cast<double>(d.size());
  ParamVector p = init;
  double ll = log_likelihood(d, p, fam);
  if (!std::isfinite(ll))
    throw fit_error("em_fit: initial point has zero likelihood", {init.begin(), init.end()}, ll);
  if (loglik_trace) loglik_trace->push_back(ll);

  // complete-data objective in (α, β, γ) given z (θ part is separable)
  const auto q_abg = [&](double a, double b, double g, const std::vector<double>& z) {
    double acc = n * (std::log(a) + std::log(g) + g * std::log(b)) + (g - 1.0) * d.sum_log();
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double w = std::pow(b * d.values()[i], g);
      if (w == 0.0 || !std::isfinite(w)) return -std::numeric_limits<double>::infinity();
      acc += -w + (a * z[i] - 1.0) * log1mexp(w);
    }
    return acc;
  };
  const auto maximize_coord = [&](auto q1, double current, double xtol) {
    // expand a bracket around the current value, then Brent
    double lo = current * 0.5, hi = current * 2.0;
    double qlo = q1(lo), qc = q1(current), qhi = q1(hi);
    for (int i = 0; i < 60 && qlo > qc; ++i) {
      hi = current; qhi = qc;
      current = lo; qc = qlo;
      lo *= 0.5; qlo = q1(lo);
    }
    for (int i = 0; i < 60 && qhi > qc; ++i) {
      lo = current; qlo = qc;
      current = hi; qc = qhi;
      hi *= 2.0; qhi = q1(hi);
    }
    const double x = brent_min([&](double v) { return -q1(v); }, lo, hi, xtol);
    return q1(x) >= qc ? x : current;
  };

  int it = 0;
  bool converged = false;
  const double s_hi = fam.support_upper();
  for (; it < max_iter; ++it) {
    const ParamVector prev = p;
    const std::vector<double> z = em_expected_z(d, p, fam);
    double zbar = 0.0;
    for (double zi : z) zbar += zi;
    zbar /= n;

    // θ-step: θC'(θ)/C(θ) = z̄ (monotone in θ)
    if (zbar > 1.0) {
      double lo = std::isfinite(s_hi) ? 1e-12 : 1e-12;
      double hi = std::isfinite(s_hi) ? s_hi * (1.0 - 1e-12) : std::max(1.0, p[3]);
      if (!std::isfinite(s_hi)) {
        int guard = 0;
        while (fam.mean(hi) < zbar && guard++ < 200) hi *= 2.0;
      }
      if (fam.mean(hi) >= zbar) {
        p[3] = brent_root([&](double t) { return fam.mean(t) - zbar; }, lo, hi, 1e-14);
      } else {
        p[3] = hi;  // z̄ at the top of the attainable range; clamp
      }
    } else {
      p[3] = 1e-12 * (std::isfinite(s_hi) ? s_hi : 1.0);
    }

    // (α, β, γ)-step: conditional maximization sweeps. α has a closed form;
    // (β, γ) solve the two displayed score equations by 2-D Newton on the
    // complete-data objective, safeguarded by bracketed 1-D maximization when
    // a Newton step would not increase Q. Sweeps repeat until the M-step is
    // essentially exact, so each outer pass is a genuine EM iteration.
    for (int sweep = 0; sweep < 8; ++sweep) {
      const double a_prev = p[0], b_prev = p[1], g_prev = p[2];
      double szl = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i)
        szl += z[i] * log1mexp(std::pow(p[1] * d.values()[i], p[2]));
      p[0] = -n / szl;

      // Newton iterations for (β, γ) at fixed α, z
      bool newton_ok = true;
      for (int nit = 0; nit < 12; ++nit) {
        double qb = n * p[2] / p[1], qg = n / p[2] + n * std::log(p[1]) + d.sum_log();
        double hbb = -n * p[2] / (p[1] * p[1]), hgg = -n / (p[2] * p[2]), hbg = n / p[1];
        for (std::size_t i = 0; i < d.size(); ++i) {
          const double y = d.values()[i];
          const double lby = std::log(p[1]) + std::log(y);
          const double w = std::exp(p[2] * lby);
          const double E = std::exp(-w), G = -std::expm1(-w);
          const double D = E / G, EG2 = D / G;
          const double c = p[0] * z[i] - 1.0;
          const double wb = p[2] * w / p[1], wg = w * lby;
          const double wbb = p[2] * (p[2] - 1.0) * w / (p[1] * p[1]);
          const double wgg = w * lby * lby;
          const double wbg = (w / p[1]) * (1.0 + p[2] * lby);
          qb += -wb + c * D * wb;
          qg += -wg + c * D * wg;
          hbb += -wbb + c * (D * wbb - EG2 * wb * wb);
          hgg += -wgg + c * (D * wgg - EG2 * wg * wg);
          hbg += -wbg + c * (D * wbg - EG2 * wb * wg);
        }
        if (std::max(std::fabs(qb) * p[1], std::fabs(qg) * p[2]) < 1e-11 * n) break;
        const double det = hbb * hgg - hbg * hbg;
        if (!(std::fabs(det) > 1e-300)) {
          newton_ok = false;
          break;
        }
        const double db = (-qb * hgg + qg * hbg) / det;
        const double dg = (-qg * hbb + qb * hbg) / det;
        double lam = 1.0;
        const double q0 = q_abg(p[0], p[1], p[2], z);
        bool moved = false;
        for (int h = 0; h < 30; ++h) {
          const double bn = p[1] + lam * db, gn = p[2] + lam * dg;
          if (bn > 0 && gn > 0 && q_abg(p[0], bn, gn, z) >= q0) {
            p[1] = bn;
            p[2] = gn;
            moved = true;
            break;
          }
          lam *= 0.5;
        }
        if (!moved) {
          newton_ok = nit > 0;  // fine if Newton already made progress
          break;
        }
      }
      if (!newton_ok) {  // fallback: bracketed coordinate maximization
        p[1] = maximize_coord([&](double b) { return q_abg(p[0], b, p[2], z); }, p[1], 1e-11);
        p[2] = maximize_coord([&](double g) { return q_abg(p[0], p[1], g, z); }, p[2], 1e-11);
      }
      const double sweep_change = std::max({std::fabs(p[0] - a_prev) / std::max(a_prev, 1e-12),
                                            std::fabs(p[1] - b_prev) / std::max(b_prev, 1e-12),
                                            std::fabs(p[2] - g_prev) / std::max(g_prev, 1e-12)});
      if (sweep_change < 1e-11) break;
    }

    const double lln = log_likelihood(d, p, fam);
    if (loglik_trace) loglik_trace->push_back(lln);
    ll = lln;
    double rel = 0.0;
    for (int i = 0; i < 4; ++i)
      rel = std::max(rel, std::fabs(p[i] - prev[i]) / std::max(std::fabs(prev[i]), 1e-12));
    if (rel < tol) {
      converged = true;
      ++it;
      break;
    }
  }

  FitResult out;
  out.method = "em";
  out.param_names = {"alpha", "beta", "gamma", "theta"};
  out.params = {p[0], p[1], p[2], p[3]};
  out.loglik = ll;
  out.neg2loglik = -2.0 * ll;
  out.iterations = it;
  Eigen::Vector4d sc = Eigen::Vector4d::Zero();
  bool deriv_ok = true;
  Eigen::Matrix4d info = Eigen::Matrix4d::Zero();
  try {
    sc = score(d, p, fam);
    info = observed_information(d, p, fam);
  } catch (const domain_error&) {
    deriv_ok = false;
  }
  out.score_norm = deriv_ok ? sc.lpNorm<Eigen::Infinity>()
                            : std::numeric_limits<double>::infinity();
  const Eigen::LLT<Eigen::Matrix4d> llt(info);
  if (deriv_ok && llt.info() == Eigen::Success) {
    out.cov = llt.solve(Eigen::Matrix4d::Identity());
    out.std_errors.resize(4);
    for (int i = 0; i < 4; ++i)
      out.std_errors[i] = out.cov(i, i) > 0 ? std::sqrt(out.cov(i, i)) : 0.0;
  } else {
    out.message += "information matrix is not positive definite; ";
  }
  out.converged = converged;
  if (!converged) out.message += "parameter change did not reach tol within max_iter; ";
  return out;
}

/// Θ̂_r ± z_{(1+level)/2} √(Î^{rr}) on the original scale.
inline std::vector<std::pair<double, double>> confidence_intervals(const FitResult& fr,
                                                                   double level) {
  if (!(level > 0 && level < 1)) throw domain_error("confidence_intervals: level must be in (0,1)");
  if (fr.std_errors.empty())
    throw domain_error("confidence_intervals: covariance unavailable (fit not converged?)");
  const double z = normal_quantile(0.5 * (1.0 + level));
  std::vector<std::pair<double, double>> out;
  out.reserve(fr.params.size());
  for (std::size_t i = 0; i < fr.params.size(); ++i)
    out.emplace_back(fr.params[i] - z * fr.std_errors[i], fr.params[i] + z * fr.std_errors[i]);
  return out;
}

}  // namespace ewps

#endif  // EWPS_INFERENCE_HPP

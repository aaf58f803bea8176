// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Goodness-of-fit statistics for a fitted continuous model on complete data:
// Kolmogorov-Smirnov with its asymptotic p-value, AIC, the Anderson-Darling
// and Cramér-von Mises statistics on the probability integral transform, the
// empirical scaled TTT transform, and the empirical survival steps.

#ifndef EWPS_GOF_HPP
#define EWPS_GOF_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "ewps/dataset.hpp"
#include "ewps/errors.hpp"
#include "ewps/special.hpp"

namespace ewps {

struct GofReport {
  double ks = 0;
  double ks_pvalue = 0;
  double neg2loglik = 0;
  double aic = 0;
  double ad = 0;
  double cm = 0;
  int k_params = 0;
};

/// D_n = max_i max(i/n - F(y_(i)), F(y_(i)) - (i-1)/n) and its asymptotic
/// p-value P(K > sqrt(n)·D_n). Ties are kept; the ECDF handles them.
inline std::pair<double, double> ks_test(const Dataset& d,
                                         const std::function<double(double)>& cdf) {
  const auto& ys = d.sorted();
  const double n = static_cast<double>(ys.size());
  double dn = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double F = cdf(ys[i]);
    if (!(F >= 0.0 && F <= 1.0))
      throw domain_error("ks_test: model cdf returned a value outside [0,1]");
    dn = std::max(dn, std::max((i + 1.0) / n - F, F - static_cast<double>(i) / n));
  }
  return {dn, kolmogorov_pvalue(std::sqrt(n) * dn)};
}

/// AIC = -2 log L + 2k.
inline double aic(double neg2loglik, int k) {
  if (k < 1) throw domain_error("aic: k must be >= 1");
  return neg2loglik + 2.0 * k;
}

/// Chen-Balakrishnan PIT statistics on u_i = F(y_(i)):
///   CM = Σ (u_i - (2i-1)/(2n))² + 1/(12n)
///   AD = -n - (1/n) Σ (2i-1)[log u_i + log(1 - u_{n+1-i})].
inline std::pair<double, double> ad_cm(const Dataset& d,
                                       const std::function<double(double)>& cdf) {
  const auto& ys = d.sorted();
  const std::size_t n = ys.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = cdf(ys[i]);
    if (!(u[i] > 0.0 && u[i] < 1.0))
      throw domain_error("ad_cm: PIT value at the boundary (u = 0 or 1)");
  }
  double cm = 1.0 / (12.0 * n);
  double ad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = (2.0 * (i + 1.0) - 1.0) / (2.0 * n);
    cm += (u[i] - mid) * (u[i] - mid);
    ad += (2.0 * (i + 1.0) - 1.0) * (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
  }
  return {-static_cast<double>(n) - ad / static_cast<double>(n), cm};
}

/// Empirical scaled TTT transform: points (i/n, T_i), i = 0..n, with
/// T_i = [Σ_{j≤i} y_(j) + (n-i) y_(i)] / Σ_j y_j. Concavity of the polyline
/// indicates an increasing hazard.
inline std::vector<std::pair<double, double>> empirical_ttt(const Dataset& d) {
  if (d.size() < 2) throw domain_error("empirical_ttt: need at least 2 observations");
  const auto& ys = d.sorted();
  const double n = static_cast<double>(ys.size());
  const double total = d.sum();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(ys.size() + 1);
  pts.emplace_back(0.0, 0.0);
  double cum = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    cum += ys[i];
    const double t = (cum + (n - (i + 1.0)) * ys[i]) / total;
    pts.emplace_back((i + 1.0) / n, t);
  }
  return pts;
}

/// Right-continuous empirical survival steps (y_(i), 1 - i/n); tied values
/// merge into a single step whose drop is the tie multiplicity over n.
inline std::vector<std::pair<double, double>> empirical_survival(const Dataset& d) {
  const auto& ys = d.sorted();
  const double n = static_cast<double>(ys.size());
  std::vector<std::pair<double, double>> steps;
  std::size_t i = 0;
  while (i < ys.size()) {
    std::size_t j = i;
    while (j + 1 < ys.size() && ys[j + 1] == ys[i]) ++j;
    steps.emplace_back(ys[i], 1.0 - (j + 1.0) / n);
    i = j + 1;
  }
  return steps;
}

inline GofReport evaluate_gof(const Dataset& d, const std::function<double(double)>& cdf,
                              double neg2loglik, int k) {
  GofReport r;
  const auto [dn, pv] = ks_test(d, cdf);
  const auto [ad_, cm_] = ad_cm(d, cdf);
  r.ks = dn;
  r.ks_pvalue = pv;
  r.neg2loglik = neg2loglik;
  r.aic = aic(neg2loglik, k);
  r.ad = ad_;
  r.cm = cm_;
  r.k_params = k;
  return r;
}

}  // namespace ewps

#endif  // EWPS_GOF_HPP

// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Zero-truncated power-series compounding laws P(N=n) = a_n θ^n / C(θ), n ≥ 1,
// with C(θ) = Σ_{n≥1} a_n θ^n finite and increasing on (0, s). The four
// classical families (geometric, Poisson, logarithmic, binomial) carry closed
// forms for C and its first three derivatives, the inverse of C, and the
// ratios C''/C', C'''/C' that the likelihood machinery needs. A literal
// polynomial family (finite coefficient list) is provided for plotting
// demonstration laws such as C(θ) = θ + θ^20.
//
// Note: the binomial inverse is (u+1)^{1/m} − 1, the actual inverse of
// C(θ) = (θ+1)^m − 1; the commonly printed (θ−1)^{1/m} − 1 does not satisfy
// the round-trip identity.

#ifndef EWPS_POWER_SERIES_HPP
#define EWPS_POWER_SERIES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ewps/errors.hpp"
#include "ewps/rng.hpp"
#include "ewps/special.hpp"

namespace ewps {

enum class PsFamily { geometric, poisson, logarithmic, binomial, polynomial };

class PowerSeries {
 public:
  static PowerSeries geometric() { return PowerSeries(PsFamily::geometric, 0, {}); }
  static PowerSeries poisson() { return PowerSeries(PsFamily::poisson, 0, {}); }
  static PowerSeries logarithmic() { return PowerSeries(PsFamily::logarithmic, 0, {}); }

  static PowerSeries binomial(int m) {
    if (m < 1) throw domain_error("binomial family: replica count m must be >= 1");
    return PowerSeries(PsFamily::binomial, m, {});
  }

  /// Finite coefficient list: coeffs[i] = a_{i+1}, all >= 0, a_1 > 0 required
  /// so that the family keeps the small-θ limit behavior of the shipped four.
  static PowerSeries polynomial(std::vector<double> coeffs) {
    if (coeffs.empty() || !(coeffs.front() >= 0))
      throw domain_error("polynomial family: empty or invalid coefficient list");
    bool any = false;
    for (double a : coeffs) {
      if (!(a >= 0) || !std::isfinite(a))
        throw domain_error("polynomial family: coefficients must be finite and nonnegative");
      any = any || a > 0;
    }
    if (!any) throw domain_error("polynomial family: all coefficients are zero");
    return PowerSeries(PsFamily::polynomial, 0, std::move(coeffs));
  }

  PsFamily kind() const { return kind_; }
  int replicas() const { return m_; }

  const char* name() const {
    switch (kind_) {
      case PsFamily::geometric: return "geometric";
      case PsFamily::poisson: return "poisson";
      case PsFamily::logarithmic: return "logarithmic";
      case PsFamily::binomial: return "binomial";
      default: return "polynomial";
    }
  }

  /// Upper end s of the θ domain (0, s).
  double support_upper() const {
    switch (kind_) {
      case PsFamily::geometric:
      case PsFamily::logarithmic: return 1.0;
      default: return std::numeric_limits<double>::infinity();
    }
  }

  void check_theta(double theta) const {
    if (!(theta > 0.0) || !(theta < support_upper()) || !std::isfinite(theta))
      throw domain_error(std::string(name()) + " family: theta=" + std::to_string(theta) +
                         " outside (0, s)");
  }

  /// Largest n with a_n > 0 (INT_MAX for the infinite families).
  int coeff_cutoff() const {
    if (kind_ == PsFamily::binomial) return m_;
    if (kind_ == PsFamily::polynomial) {
      int last = 0;
      for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i)
        if (coeffs_[i] > 0) last = i + 1;
      return last;
    }
    return std::numeric_limits<int>::max();
  }

  /// C(θ) and derivatives: order 0..3.
  double c(double theta, int order = 0) const {
    check_theta(theta);
    if (order < 0 || order > 3) throw domain_error("eval_c: order must be in {0,1,2,3}");
    switch (kind_) {
      case PsFamily::geometric: {
        const double om = 1.0 - theta;
        switch (order) {
          case 0: return theta / om;
          case 1: return 1.0 / (om * om);
          case 2: return 2.0 / (om * om * om);
          default: return 6.0 / (om * om * om * om);
        }
      }
      case PsFamily::poisson:
        return order == 0 ? std::expm1(theta) : std::exp(theta);
      case PsFamily::logarithmic: {
        const double om = 1.0 - theta;
        switch (order) {
          case 0: return -std::log1p(-theta);
          case 1: return 1.0 / om;
          case 2: return 1.0 / (om * om);
          default: return 2.0 / (om * om * om);
        }
      }
      case PsFamily::binomial: {
        const double lp = std::log1p(theta);
        switch (order) {
          case 0: return std::expm1(m_ * lp);
          case 1: return m_ * std::exp((m_ - 1) * lp);
          case 2: return m_ == 1 ? 0.0 : m_ * (m_ - 1.0) * std::exp((m_ - 2) * lp);
          default: return m_ <= 2 ? 0.0 : m_ * (m_ - 1.0) * (m_ - 2.0) * std::exp((m_ - 3) * lp);
        }
      }
      default:  // polynomial
        return order == 0 ? c_unchecked(theta) : c_unchecked_d(theta, order);
    }
  }

  /// θ with C(θ) = u; the image of C is (0, ∞) for all shipped families.
  double c_inverse(double u) const {
    if (!(u > 0) || !std::isfinite(u)) throw domain_error("inverse_c: u outside the image of C");
    switch (kind_) {
      case PsFamily::geometric: return u / (1.0 + u);
      case PsFamily::poisson: return std::log1p(u);
      case PsFamily::logarithmic: return -std::expm1(-u);
      case PsFamily::binomial: return std::expm1(std::log1p(u) / m_);
      default: {
        // monotone Newton with bisection safeguard
        double lo = 0.0, hi = 1.0;
        while (c_unchecked(hi) < u) {
          lo = hi;
          hi *= 2.0;
          if (hi > 1e300) throw domain_error("inverse_c: u outside the image of C");
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
          const double fx = c_unchecked(x) - u;
          (fx > 0 ? hi : lo) = x;
          const double dfx = c_unchecked_d1(x);
          double nx = x - fx / dfx;
          if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
          if (std::fabs(nx - x) <= 1e-15 * std::fabs(x)) return nx;
          x = nx;
        }
        return x;
      }
    }
  }

  /// log a_n (−∞ where a_n = 0).
  double log_coeff(int n) const {
    if (n < 1) throw domain_error("power series coefficients start at n = 1");
    switch (kind_) {
      case PsFamily::geometric: return 0.0;
      case PsFamily::poisson: return -std::lgamma(n + 1.0);
      case PsFamily::logarithmic: return -std::log(static_cast<double>(n));
      case PsFamily::binomial:
        if (n > m_) return -std::numeric_limits<double>::infinity();
        return std::lgamma(m_ + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m_ - n + 1.0);
      default:
        if (n > static_cast<int>(coeffs_.size()) || coeffs_[n - 1] <= 0)
          return -std::numeric_limits<double>::infinity();
        return std::log(coeffs_[n - 1]);
    }
  }

  /// log C(θ), stable for large θ in the unbounded families.
  double log_c(double theta) const {
    check_theta(theta);
    switch (kind_) {
      case PsFamily::geometric: return std::log(theta) - std::log1p(-theta);
      case PsFamily::poisson: return theta + log1mexp(theta);
      case PsFamily::logarithmic: return std::log(-std::log1p(-theta));
      case PsFamily::binomial: {
        const double t = m_ * std::log1p(theta);
        return t + log1mexp(t);
      }
      default: return std::log(c_unchecked(theta));
    }
  }

  /// P(N = n) = a_n θ^n / C(θ); zero-truncated, so n = 0 is rejected.
  double pmf(double theta, int n) const {
    check_theta(theta);
    if (n < 1) throw domain_error("ps_pmf: the law is zero-truncated, n must be >= 1");
    const double la = log_coeff(n);
    if (la == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::exp(la + n * std::log(theta) - log_c(theta));
  }

  /// C(θv)/C(θ) for v ∈ [0,1] (a cdf ratio: 0 at v=0, 1 at v=1).
  double cdf_ratio(double theta, double v) const {
    switch (kind_) {
      case PsFamily::geometric: return v * (1.0 - theta) / (1.0 - theta * v);
      case PsFamily::poisson: return std::expm1(theta * v) / std::expm1(theta);
      case PsFamily::logarithmic: return std::log1p(-theta * v) / std::log1p(-theta);
      case PsFamily::binomial:
        return std::expm1(m_ * std::log1p(theta * v)) / std::expm1(m_ * std::log1p(theta));
      default: return c_unchecked(theta * v) / c_unchecked(theta);
    }
  }

  /// 1 − C(θv)/C(θ) computed from one_minus_v = 1−v without cancellation.
  double survival_ratio(double theta, double v, double one_minus_v) const {
    switch (kind_) {
      case PsFamily::geometric:
        return one_minus_v / ((1.0 - theta) + theta * one_minus_v);
      case PsFamily::poisson:
        return std::expm1(theta * one_minus_v) * std::exp(theta * v) / std::expm1(theta);
      case PsFamily::logarithmic:
        return std::log1p(theta * one_minus_v / (1.0 - theta)) / (-std::log1p(-theta));
      case PsFamily::binomial: {
        const double lv = std::log1p(theta * v);
        return std::exp(m_ * lv) * std::expm1(m_ * std::log1p(theta * one_minus_v / (1.0 + theta * v))) /
               std::expm1(m_ * std::log1p(theta));
      }
      default: return 1.0 - cdf_ratio(theta, v);
    }
  }

  /// C^{-1}(q·C(θ))/θ, the inner transform of the quantile function.
  double quantile_core(double theta, double q) const {
    switch (kind_) {
      case PsFamily::geometric: return q / (1.0 - theta * (1.0 - q));
      case PsFamily::poisson: return std::log1p(q * std::expm1(theta)) / theta;
      case PsFamily::logarithmic: return -std::expm1(q * std::log1p(-theta)) / theta;
      case PsFamily::binomial:
        return std::expm1(std::log1p(q * std::expm1(m_ * std::log1p(theta))) / m_) / theta;
      default: return c_inverse(q * c_unchecked(theta)) / theta;
    }
  }

  /// log C'(u) for u ∈ [0, s).
  double log_cprime(double u) const {
    switch (kind_) {
      case PsFamily::geometric: return -2.0 * std::log1p(-u);
      case PsFamily::poisson: return u;
      case PsFamily::logarithmic: return -std::log1p(-u);
      case PsFamily::binomial: return std::log(static_cast<double>(m_)) + (m_ - 1) * std::log1p(u);
      default: return std::log(c_unchecked_d1(u));
    }
  }

  /// C''(u)/C'(u).
  double cpp_over_cp(double u) const {
    switch (kind_) {
      case PsFamily::geometric: return 2.0 / (1.0 - u);
      case PsFamily::poisson: return 1.0;
      case PsFamily::logarithmic: return 1.0 / (1.0 - u);
      case PsFamily::binomial: return (m_ - 1.0) / (1.0 + u);
      default: return c_unchecked_d(u, 2) / c_unchecked_d1(u);
    }
  }

  /// C'''(u)/C'(u).
  double cppp_over_cp(double u) const {
    switch (kind_) {
      case PsFamily::geometric: {
        const double om = 1.0 - u;
        return 6.0 / (om * om);
      }
      case PsFamily::poisson: return 1.0;
      case PsFamily::logarithmic: {
        const double om = 1.0 - u;
        return 2.0 / (om * om);
      }
      case PsFamily::binomial: {
        const double op = 1.0 + u;
        return (m_ - 1.0) * (m_ - 2.0) / (op * op);
      }
      default: return c_unchecked_d(u, 3) / c_unchecked_d1(u);
    }
  }

  /// E[N] = θ C'(θ)/C(θ); strictly increasing in θ, with range (1, sup E[N]).
  double mean(double theta) const {
    check_theta(theta);
    switch (kind_) {
      case PsFamily::geometric: return 1.0 / (1.0 - theta);
      case PsFamily::poisson: return theta / (-std::expm1(-theta));
      case PsFamily::logarithmic: return -theta / ((1.0 - theta) * std::log1p(-theta));
      case PsFamily::binomial:
        return m_ * theta * std::exp((m_ - 1) * std::log1p(theta)) / std::expm1(m_ * std::log1p(theta));
      default: return theta * c_unchecked_d1(theta) / c_unchecked(theta);
    }
  }

  /// One draw of N by walking the cumulative pmf.
  int sample(double theta, UniformStream& stream) const {
    check_theta(theta);
    const double u = stream.next();
    const int cutoff = coeff_cutoff();
    double p = pmf(theta, 1);
    double cum = p;
    int n = 1;
    while (cum < u && n < cutoff && n < 100000000) {
      ++n;
      // ratio p_{n}/p_{n-1} per family keeps the walk O(1) per step
      switch (kind_) {
        case PsFamily::geometric: p *= theta; break;
        case PsFamily::poisson: p *= theta / n; break;
        case PsFamily::logarithmic: p *= theta * (n - 1.0) / n; break;
        case PsFamily::binomial: p *= theta * (m_ - n + 1.0) / n; break;
        default: p = pmf(theta, n); break;
      }
      cum += p;
    }
    return n;
  }

  /// a_1..a_k as a dense vector (for series evaluators built on power_coeffs).
  std::vector<double> coefficients(int k) const {
    std::vector<double> a(static_cast<std::size_t>(k));
    for (int n = 1; n <= k; ++n) {
      const double la = log_coeff(n);
      a[n - 1] = la == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(la);
    }
    return a;
  }

 private:
  PowerSeries(PsFamily kind, int m, std::vector<double> coeffs)
      : kind_(kind), m_(m), coeffs_(std::move(coeffs)) {}

  double c_unchecked(double t) const {
    double sum = 0.0;
    for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i)
      sum = sum * t + coeffs_[i];
    return sum * t;
  }
  double c_unchecked_d1(double t) const { return c_unchecked_d(t, 1); }
  double c_unchecked_d(double t, int order) const {
    double sum = 0.0;
    for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) {
      const int n = i + 1;
      double fac = 1.0;
      for (int d = 0; d < order; ++d) fac *= n - d;
      if (n >= order) sum += coeffs_[i] * fac * std::pow(t, n - order);
    }
    return sum;
  }

  PsFamily kind_;
  int m_;
  std::vector<double> coeffs_;
};

/// Coefficients of (Σ_i w_i u^i)^power = Σ_i c_i u^i, i = 0..i_max, by the
/// J.C.P. Miller recurrence c_i = (i w_0)^{-1} Σ_{m=1}^{i} ((power+1)m − i) w_m c_{i−m},
/// c_0 = w_0^power. Valid for any real power when w_0 > 0.
inline std::vector<double> power_coeffs(std::span<const double> w, double power,
                                        std::size_t i_max) {
  if (w.empty() || w[0] == 0.0) throw domain_error("power_coeffs: w_0 must be nonzero");
  std::vector<double> c(i_max + 1, 0.0);
  c[0] = std::pow(w[0], power);
  for (std::size_t i = 1; i <= i_max; ++i) {
    double acc = 0.0;
    const std::size_t m_hi = std::min(i, w.size() - 1);
    for (std::size_t m = 1; m <= m_hi; ++m)
      acc += ((power + 1.0) * static_cast<double>(m) - static_cast<double>(i)) * w[m] * c[i - m];
    c[i] = acc / (static_cast<double>(i) * w[0]);
  }
  return c;
}

namespace detail {

/// Σ_{j≥0} (-1)^j C(x, j) (j+shift)^{-p}, the alternating generalized-binomial
/// sum behind the closed-form moment series. Terminates exactly when x is a
/// nonnegative integer; otherwise runs until the tail rule triggers. Long
/// double accumulation with a cancellation estimate: callers treat the result
/// as unreliable when |value| sinks below max_term · eps.
struct AltBinomSum {
  double value = 0.0;
  double max_term = 0.0;
  long terms = 0;
  bool converged = false;
};

inline AltBinomSum alt_binom_sum(double x, double p, double shift = 1.0,
                                 long max_terms = 2000000) {
  AltBinomSum out;
  const bool integral = x >= 0 && std::fabs(x - std::nearbyint(x)) < 1e-9 && x < 2e9;
  long double sum = 0.0L;
  long double t = 1.0L;  // (-1)^j C(x,j), j = 0
  long double maxt = 0.0L;
  for (long j = 0;; ++j) {
    const long double term = t * std::pow(static_cast<long double>(j + shift),
                                          static_cast<long double>(-p));
    sum += term;
    if (std::fabs(static_cast<double>(term)) > maxt) maxt = std::fabs(static_cast<double>(term));
    out.terms = j + 1;
    if (integral && j >= static_cast<long>(std::nearbyint(x))) {
      out.converged = true;
      break;
    }
    if (!integral && j > 32 &&
        std::fabs(static_cast<double>(term)) < 1e-14 * std::fabs(static_cast<double>(sum)) &&
        j > x) {
      out.converged = true;
      break;
    }
    if (j + 1 >= max_terms) break;
    t *= (static_cast<long double>(j) - static_cast<long double>(x)) / (j + 1.0L);
  }
  out.value = static_cast<double>(sum);
  out.max_term = static_cast<double>(maxt);
  return out;
}

/// Σ_j (-1)^j C(x, j) g(j) in long double with a cancellation-noise bound
/// (eps times the largest term magnitude). Terminates exactly for integer x;
/// otherwise by the relative tail rule. err is infinite when the cap is hit,
/// so the caller's reliability accounting rejects the result.
template <class G>
inline std::pair<double, double> alt_binom_weighted(double x, G&& g, long cap = 20000) {
  const bool integral = x >= 0 && std::fabs(x - std::nearbyint(x)) < 1e-9 && x < 2e9;
  long double sum = 0.0L;
  long double t = 1.0L;
  long double maxabs = 0.0L;
  for (long j = 0;; ++j) {
    const long double term = t * static_cast<long double>(g(j));
    sum += term;
    const long double a = term < 0 ? -term : term;
    if (a > maxabs) maxabs = a;
    if (integral && j >= static_cast<long>(std::nearbyint(x))) break;
    if (!integral && j > 32 && j > x &&
        static_cast<double>(a) < 1e-13 * std::fabs(static_cast<double>(sum)))
      break;
    if (j + 1 >= cap)
      return {static_cast<double>(sum), std::numeric_limits<double>::infinity()};
    t *= (static_cast<long double>(j) - static_cast<long double>(x)) / (j + 1.0L);
  }
  return {static_cast<double>(sum), static_cast<double>(maxabs) * 1.1e-19};
}

/// Accumulator for series whose terms carry cancellation-noise bounds. A term
/// whose noise dominates its value marks the reliability limit of long-double
/// evaluation: the sum truncates there when the term is already negligible
/// and raises convergence_error otherwise, instead of degrading silently.
class NoisyTailSum {
 public:
  explicit NoisyTailSum(const char* label) : label_(label) {}

  /// Returns true when the sum is complete.
  bool add(long n, double value, double err) {
    scale_ = std::max(scale_, std::fabs(static_cast<double>(acc_)) + std::fabs(value));
    const double floor = 1e-300 + 1e-11 * scale_;
    if (n >= min_terms_) {
      if (std::fabs(value) + err < floor) {
        noise_ += std::fabs(value) + err;
        return true;
      }
      if (err > std::fabs(value)) {  // reliability exhausted; truncate or fail
        if (std::fabs(value) + err > 1e-6 * scale_)
          throw convergence_error(
              std::string(label_) + ": alternating cancellation exhausts precision", n, value);
        noise_ += std::fabs(value) + err;
        return true;
      }
    }
    acc_ += value;
    noise_ += err;
    if (n >= min_terms_ && std::fabs(value) < 1e-14 * std::fabs(static_cast<double>(acc_)))
      return true;
    return false;
  }

  double total() const {
    if (noise_ > 1e-6 * std::fabs(static_cast<double>(acc_)) + 1e-300)
      throw convergence_error(std::string(label_) + ": accumulated noise exceeds tolerance", 0,
                              noise_);
    return static_cast<double>(acc_);
  }

 private:
  const char* label_;
  long double acc_ = 0.0L;
  double noise_ = 0.0;
  double scale_ = 0.0;
  int min_terms_ = 8;
};

}  // namespace detail

}  // namespace ewps

#endif  // EWPS_POWER_SERIES_HPP

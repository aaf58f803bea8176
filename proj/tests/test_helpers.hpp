// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// Shared oracles for the test suite. These deliberately avoid the library's
// own quadrature/statistics code paths where they act as the independent
// check: the integrator here is plain composite Simpson with step doubling.

#ifndef EWPS_TEST_HELPERS_HPP
#define EWPS_TEST_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace testutil {

template <class F>
double simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

/// Step-doubling Simpson; independent of the library's Gauss-Kronrod code.
template <class F>
double integrate_oracle(F&& f, double a, double b, double rel_tol = 1e-9) {
  int n = 64;
  double prev = simpson(f, a, b, n);
  for (int k = 0; k < 16; ++k) {
    n *= 2;
    const double cur = simpson(f, a, b, n);
    if (std::fabs(cur - prev) <= rel_tol * std::fabs(cur) + 1e-300) return cur;
    prev = cur;
  }
  return prev;
}

/// Exhaustive one-sample K-S over both step sides, for comparison against the
/// library's ks_test.
inline double ks_brute_force(std::vector<double> sorted_u) {
  std::sort(sorted_u.begin(), sorted_u.end());
  const double n = static_cast<double>(sorted_u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_u.size(); ++i) {
    d = std::max(d, std::fabs((i + 1.0) / n - sorted_u[i]));
    d = std::max(d, std::fabs(sorted_u[i] - static_cast<double>(i) / n));
  }
  return d;
}

/// Two-sample K-S statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return d;
}

struct MeanSe {
  double mean;
  double se;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0;
  for (double x : xs) m += x;
  m /= n;
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= (n - 1.0);
  return {m, std::sqrt(v / n)};
}

}  // namespace testutil

#endif  // EWPS_TEST_HELPERS_HPP

// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "ewps/power_series.hpp"
#include "ewps/rng.hpp"

using namespace ewps;

namespace {
std::vector<PowerSeries> all_families() {
  return {PowerSeries::geometric(), PowerSeries::poisson(), PowerSeries::logarithmic(),
          PowerSeries::binomial(10)};
}

std::vector<double> theta_grid(const PowerSeries& fam) {
  if (std::isfinite(fam.support_upper())) return {0.05, 0.3, 0.5, 0.8, 0.95};
  return {0.05, 0.5, 1.0, 2.5, 6.0};
}
}  // namespace

TEST_CASE("eval_c closed forms at the table points") {
  REQUIRE_THAT(PowerSeries::geometric().c(0.5, 0), Catch::Matchers::WithinRel(1.0, 1e-15));
  REQUIRE_THAT(PowerSeries::poisson().c(1.0, 0),
               Catch::Matchers::WithinRel(std::exp(1.0) - 1.0, 1e-15));
  REQUIRE_THAT(PowerSeries::logarithmic().c(0.5, 1), Catch::Matchers::WithinRel(2.0, 1e-15));
  REQUIRE_THROWS_AS(PowerSeries::geometric().c(1.0, 0), domain_error);
  REQUIRE_THROWS_AS(PowerSeries::poisson().c(-0.1, 0), domain_error);
  REQUIRE_THROWS_AS(PowerSeries::geometric().c(0.5, 4), domain_error);
}

TEST_CASE("eval_c derivatives match central finite differences") {
  for (const auto& fam : all_families()) {
    for (double th : theta_grid(fam)) {
      for (int order = 1; order <= 3; ++order) {
        const double h = th * 1e-6;
        const double fd = (fam.c(th + h, order - 1) - fam.c(th - h, order - 1)) / (2.0 * h);
        const double an = fam.c(th, order);
        if (an == 0.0) {
          REQUIRE_THAT(fd, Catch::Matchers::WithinAbs(0.0, 1e-6));
        } else {
          REQUIRE_THAT(an, Catch::Matchers::WithinRel(fd, 1e-7));
        }
      }
    }
  }
}

TEST_CASE("polynomial family derivative consistency") {
  // the Fig.-1 style demonstration law C(θ) = θ + θ^20
  const auto spiky = PowerSeries::polynomial([] {
    std::vector<double> a(20, 0.0);
    a[0] = 1.0;
    a[19] = 1.0;
    return a;
  }());
  REQUIRE_THAT(spiky.c(1.0, 0), Catch::Matchers::WithinRel(2.0, 1e-14));
  REQUIRE_THAT(spiky.c(1.0, 1), Catch::Matchers::WithinRel(21.0, 1e-14));
  REQUIRE_THAT(spiky.c_inverse(spiky.c(0.7, 0)), Catch::Matchers::WithinRel(0.7, 1e-12));
  REQUIRE_THAT(spiky.c_inverse(spiky.c(1.4, 0)), Catch::Matchers::WithinRel(1.4, 1e-12));

  // FD consistency on a better-conditioned coefficient mix
  const auto fam = PowerSeries::polynomial({1.0, 0.5, 0.0, 0.25, 0.1});
  for (double th : {0.3, 0.9, 1.8}) {
    for (int order = 1; order <= 3; ++order) {
      const double h = th * 1e-6;
      const double fd = (fam.c(th + h, order - 1) - fam.c(th - h, order - 1)) / (2.0 * h);
      REQUIRE_THAT(fam.c(th, order), Catch::Matchers::WithinRel(fd, 1e-7));
    }
  }
}

TEST_CASE("inverse_c closed forms and round trips") {
  REQUIRE_THAT(PowerSeries::geometric().c_inverse(1.0), Catch::Matchers::WithinRel(0.5, 1e-15));
  REQUIRE_THAT(PowerSeries::poisson().c_inverse(std::exp(1.0) - 1.0),
               Catch::Matchers::WithinRel(1.0, 1e-14));
  const auto bin = PowerSeries::binomial(10);
  REQUIRE_THAT(bin.c_inverse(bin.c(0.1, 0)), Catch::Matchers::WithinRel(0.1, 1e-13));
  for (const auto& fam : all_families())
    for (double th : theta_grid(fam))
      REQUIRE_THAT(fam.c_inverse(fam.c(th, 0)), Catch::Matchers::WithinRel(th, 1e-12));
  REQUIRE_THROWS_AS(PowerSeries::geometric().c_inverse(0.0), domain_error);
  REQUIRE_THROWS_AS(PowerSeries::geometric().c_inverse(-2.0), domain_error);
}

TEST_CASE("ps_pmf values and normalization") {
  REQUIRE_THAT(PowerSeries::geometric().pmf(0.5, 1), Catch::Matchers::WithinRel(0.5, 1e-15));
  REQUIRE_THAT(PowerSeries::poisson().pmf(1.0, 1),
               Catch::Matchers::WithinRel(1.0 / (std::exp(1.0) - 1.0), 1e-14));
  const auto bin = PowerSeries::binomial(10);
  const double expect = 1.0 * std::pow(0.2, 10) / (std::pow(1.2, 10) - 1.0);
  REQUIRE_THAT(bin.pmf(0.2, 10), Catch::Matchers::WithinRel(expect, 1e-13));
  REQUIRE(bin.pmf(0.2, 11) == 0.0);
  REQUIRE_THROWS_AS(bin.pmf(0.2, 0), domain_error);

  for (const auto& fam : all_families()) {
    for (double th : theta_grid(fam)) {
      double total = 0.0;
      double prev = 1.0;
      for (int n = 1; n < 100000; ++n) {
        const double p = fam.pmf(th, n);
        REQUIRE(p >= 0.0);
        total += p;
        if (n > 4 && p < 1e-13 * total && p <= prev) break;
        prev = p;
      }
      REQUIRE(total >= 1.0 - 1e-10);
      REQUIRE(total <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("power series mean is the pmf-weighted count") {
  for (const auto& fam : all_families()) {
    for (double th : theta_grid(fam)) {
      double mean = 0.0;
      for (int n = 1; n < 100000; ++n) {
        const double p = fam.pmf(th, n);
        mean += n * p;
        if (n > 8 && n * p < 1e-14 * mean) break;
      }
      REQUIRE_THAT(fam.mean(th), Catch::Matchers::WithinRel(mean, 1e-10));
    }
  }
}

TEST_CASE("power_coeffs recurrence against direct polynomial powers") {
  SECTION("binomial square") {
    const auto c = power_coeffs(std::vector<double>{1.0, 1.0}, 2.0, 2);
    REQUIRE(c == std::vector<double>{1.0, 2.0, 1.0});
  }
  SECTION("identity series") {
    const auto c = power_coeffs(std::vector<double>{1.0, 0.0, 0.0, 0.0}, 7.0, 3);
    REQUIRE(c == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  }
  SECTION("cube of 1+2u+3u^2 by brute-force convolution") {
    const std::vector<double> w{1.0, 2.0, 3.0};
    std::vector<double> brute{1.0};
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> next(brute.size() + w.size() - 1, 0.0);
      for (std::size_t i = 0; i < brute.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) next[i + j] += brute[i] * w[j];
      brute = next;
    }
    const auto c = power_coeffs(w, 3.0, 4);
    for (int i = 0; i <= 4; ++i) REQUIRE_THAT(c[i], Catch::Matchers::WithinRel(brute[i], 1e-13));
  }
  SECTION("j = 1 is the identity on w") {
    const std::vector<double> w{2.0, -1.0, 0.5, 0.25};
    const auto c = power_coeffs(w, 1.0, 3);
    for (int i = 0; i <= 3; ++i) REQUIRE_THAT(c[i], Catch::Matchers::WithinAbs(w[i], 1e-14));
  }
  SECTION("real exponent agrees with a binomial expansion") {
    // (1+u)^{1/2}: coefficients C(1/2, i)
    const auto c = power_coeffs(std::vector<double>{1.0, 1.0}, 0.5, 5);
    double binom = 1.0;
    for (int i = 0; i <= 5; ++i) {
      REQUIRE_THAT(c[i], Catch::Matchers::WithinRel(binom, 1e-13));
      binom *= (0.5 - i) / (i + 1.0);
    }
  }
  REQUIRE_THROWS_AS(power_coeffs(std::vector<double>{0.0, 1.0}, 2.0, 3), domain_error);
}

TEST_CASE("family sampling matches the pmf") {
  UniformStream stream(2024);
  const auto fam = PowerSeries::geometric();
  const double th = 0.6;
  const int n = 200000;
  std::vector<int> counts(12, 0);
  for (int i = 0; i < n; ++i) {
    const int v = fam.sample(th, stream);
    if (v < static_cast<int>(counts.size())) ++counts[v];
  }
  for (int v = 1; v <= 8; ++v) {
    const double p = fam.pmf(th, v);
    const double se = std::sqrt(p * (1 - p) / n);
    REQUIRE_THAT(counts[v] / static_cast<double>(n), Catch::Matchers::WithinAbs(p, 5 * se));
  }
}

TEST_CASE("theta domain guards") {
  REQUIRE_THROWS_AS(PowerSeries::logarithmic().check_theta(1.0), domain_error);
  REQUIRE_THROWS_AS(PowerSeries::poisson().check_theta(0.0), domain_error);
  REQUIRE_NOTHROW(PowerSeries::poisson().check_theta(25.0));
  REQUIRE_THROWS_AS(PowerSeries::binomial(0), domain_error);
}

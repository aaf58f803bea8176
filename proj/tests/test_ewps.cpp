// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "ewps/analytics.hpp"
#include "ewps/ewps.hpp"
#include "test_helpers.hpp"

using namespace ewps;

namespace {

// §14 closed forms, written independently of the library's composition.
double ewg_cdf(double y, double a, double b, double g, double th) {
  const double G = std::pow(1.0 - std::exp(-std::pow(b * y, g)), a);
  return (1.0 - th) * G / (1.0 - th * G);
}
double ewg_pdf(double y, double a, double b, double g, double th) {
  const double w = std::pow(b * y, g);
  const double Gb = 1.0 - std::exp(-w);
  const double G = std::pow(Gb, a);
  const double den = 1.0 - th * G;
  return (1.0 - th) * a * g * std::pow(b, g) * std::pow(y, g - 1.0) * std::exp(-w) *
         std::pow(Gb, a - 1.0) / (den * den);
}
double ewg_hazard(double y, double a, double b, double g, double th) {
  const double w = std::pow(b * y, g);
  const double Gb = 1.0 - std::exp(-w);
  const double G = std::pow(Gb, a);
  return (1.0 - th) * a * g * std::pow(b, g) * std::pow(y, g - 1.0) * std::exp(-w) *
         std::pow(Gb, a - 1.0) / ((1.0 - th * G) * (1.0 - G));
}
double ewp_cdf(double y, double a, double b, double g, double th) {
  const double G = std::pow(1.0 - std::exp(-std::pow(b * y, g)), a);
  return std::expm1(th * G) / std::expm1(th);
}
double ewp_pdf(double y, double a, double b, double g, double th) {
  const double w = std::pow(b * y, g);
  const double Gb = 1.0 - std::exp(-w);
  return a * g * th * std::pow(b, g) * std::pow(y, g - 1.0) * std::exp(-w) *
         std::pow(Gb, a - 1.0) * std::exp(th * std::pow(Gb, a)) / (std::exp(th) - 1.0);
}
double ewl_cdf(double y, double a, double b, double g, double th) {
  const double G = std::pow(1.0 - std::exp(-std::pow(b * y, g)), a);
  return std::log(1.0 - th * G) / std::log(1.0 - th);
}
double ewl_pdf(double y, double a, double b, double g, double th) {
  const double w = std::pow(b * y, g);
  const double Gb = 1.0 - std::exp(-w);
  return th * a * g * std::pow(b, g) * std::pow(y, g - 1.0) * std::exp(-w) *
         std::pow(Gb, a - 1.0) /
         ((th * std::pow(Gb, a) - 1.0) * std::log(1.0 - th));
}
double ewb_cdf(double y, double a, double b, double g, double th, int m) {
  const double G = std::pow(1.0 - std::exp(-std::pow(b * y, g)), a);
  return (std::pow(th * G + 1.0, m) - 1.0) / (std::pow(th + 1.0, m) - 1.0);
}
double ewb_pdf(double y, double a, double b, double g, double th, int m) {
  const double w = std::pow(b * y, g);
  const double Gb = 1.0 - std::exp(-w);
  return m * a * th * g * std::pow(b, g) * std::pow(y, g - 1.0) * std::exp(-w) *
         std::pow(Gb, a - 1.0) * std::pow(th * std::pow(Gb, a) + 1.0, m - 1.0) /
         (std::pow(th + 1.0, m) - 1.0);
}
double ewb_hazard(double y, double a, double b, double g, double th, int m) {
  const double w = std::pow(b * y, g);
  const double Gb = 1.0 - std::exp(-w);
  return m * a * th * g * std::pow(b, g) * std::pow(y, g - 1.0) * std::exp(-w) *
         std::pow(Gb, a - 1.0) * std::pow(th * std::pow(Gb, a) + 1.0, m - 1.0) /
         (std::pow(th + 1.0, m) - std::pow(th * std::pow(Gb, a) + 1.0, m));
}

std::vector<double> model_grid(const EwpsParams& p, int count = 200) {
  std::vector<double> ys(count);
  for (int i = 0; i < count; ++i)
    ys[i] = ewps_quantile(p, 0.001 + (0.999 - 0.001) * i / (count - 1.0));
  return ys;
}

}  // namespace

TEST_CASE("ewps_cdf closed-form checks") {
  const EwpsParams pg(EwParams(1, 1, 1), PowerSeries::geometric(), 0.5);
  REQUIRE_THAT(ewps_cdf(pg, std::log(3.0)), Catch::Matchers::WithinRel(0.5, 1e-14));
  REQUIRE(ewps_cdf(pg, 0.0) == 0.0);
  const EwpsParams pp(EwParams(2, 1, 1), PowerSeries::poisson(), 1.0);
  const double G1 = std::pow(1.0 - std::exp(-1.0), 2);
  REQUIRE_THAT(ewps_cdf(pp, 1.0),
               Catch::Matchers::WithinRel(std::expm1(G1) / std::expm1(1.0), 1e-13));
  REQUIRE_THROWS_AS(ewps_cdf(pg, -1.0), domain_error);
}

TEST_CASE("generic composition equals the sub-model closed forms") {
  const double a = 1.6, b = 0.9, g = 1.4;
  SECTION("EWG") {
    const EwpsParams p(EwParams(a, b, g), PowerSeries::geometric(), 0.35);
    for (double y : {0.2, 0.8, 1.5, 3.0}) {
      REQUIRE_THAT(ewps_cdf(p, y), Catch::Matchers::WithinRel(ewg_cdf(y, a, b, g, 0.35), 1e-12));
      REQUIRE_THAT(ewps_pdf(p, y), Catch::Matchers::WithinRel(ewg_pdf(y, a, b, g, 0.35), 1e-12));
      REQUIRE_THAT(ewps_survival_hazard(p, y).second,
                   Catch::Matchers::WithinRel(ewg_hazard(y, a, b, g, 0.35), 1e-12));
    }
  }
  SECTION("EWP") {
    const EwpsParams p(EwParams(a, b, g), PowerSeries::poisson(), 1.8);
    for (double y : {0.2, 0.8, 1.5, 3.0}) {
      REQUIRE_THAT(ewps_cdf(p, y), Catch::Matchers::WithinRel(ewp_cdf(y, a, b, g, 1.8), 1e-12));
      REQUIRE_THAT(ewps_pdf(p, y), Catch::Matchers::WithinRel(ewp_pdf(y, a, b, g, 1.8), 1e-12));
    }
  }
  SECTION("EWL") {
    const EwpsParams p(EwParams(1.5, 2, 1), PowerSeries::logarithmic(), 0.3);
    for (double y : {0.1, 0.5, 1.2}) {
      REQUIRE_THAT(ewps_cdf(p, y), Catch::Matchers::WithinRel(ewl_cdf(y, 1.5, 2, 1, 0.3), 1e-12));
      REQUIRE_THAT(ewps_pdf(p, y), Catch::Matchers::WithinRel(ewl_pdf(y, 1.5, 2, 1, 0.3), 1e-12));
    }
  }
  SECTION("EWB") {
    const EwpsParams p(EwParams(a, 1, 1), PowerSeries::binomial(10), 1.0);
    for (double y : {0.3, 1.0, 2.5}) {
      REQUIRE_THAT(ewps_cdf(p, y), Catch::Matchers::WithinRel(ewb_cdf(y, a, 1, 1, 1.0, 10), 1e-12));
      REQUIRE_THAT(ewps_pdf(p, y), Catch::Matchers::WithinRel(ewb_pdf(y, a, 1, 1, 1.0, 10), 1e-12));
      REQUIRE_THAT(ewps_survival_hazard(p, y).second,
                   Catch::Matchers::WithinRel(ewb_hazard(y, a, 1, 1, 1.0, 10), 1e-12));
    }
  }
}

TEST_CASE("limiting distribution as theta vanishes is the base EW") {
  for (const auto& fam : {PowerSeries::geometric(), PowerSeries::poisson(),
                          PowerSeries::logarithmic(), PowerSeries::binomial(10)}) {
    const EwParams base(1.3, 1.1, 0.8);
    const EwpsParams p(base, fam, 1e-6);
    double sup = 0.0;
    for (double y : model_grid(p))
      sup = std::max(sup, std::fabs(ewps_cdf(p, y) - ew_cdf(base, y)));
    INFO(fam.name());
    REQUIRE(sup < 1e-5);
  }
}

TEST_CASE("ewps_pdf limit, finite difference, and submodel checks") {
  const EwpsParams tiny(EwParams(1, 1, 1), PowerSeries::geometric(), 1e-12);
  REQUIRE_THAT(ewps_pdf(tiny, 1.0), Catch::Matchers::WithinAbs(std::exp(-1.0), 1e-9));
  const EwpsParams p(EwParams(2, 1, 1.5), PowerSeries::geometric(), 0.5);
  const double h = 1e-6;
  const double fd = (ewps_cdf(p, 0.8 + h) - ewps_cdf(p, 0.8 - h)) / (2 * h);
  REQUIRE_THAT(ewps_pdf(p, 0.8), Catch::Matchers::WithinRel(fd, 1e-8));
  REQUIRE_THROWS_AS(ewps_pdf(p, 0.0), domain_error);
}

TEST_CASE("survival and hazard identities") {
  const EwpsParams p(EwParams(1, 1, 1), PowerSeries::geometric(), 0.5);
  auto [s, h] = ewps_survival_hazard(p, std::log(3.0));
  REQUIRE_THAT(s, Catch::Matchers::WithinRel(0.5, 1e-13));
  REQUIRE_THAT(h, Catch::Matchers::WithinRel(ewps_pdf(p, std::log(3.0)) / s, 1e-15));
  REQUIRE_THAT(ewps_survival(p, 1e-12), Catch::Matchers::WithinAbs(1.0, 1e-11));
  // hazard = pdf/survival across families and shapes
  for (const auto& fam : {PowerSeries::geometric(), PowerSeries::poisson(),
                          PowerSeries::logarithmic(), PowerSeries::binomial(5)}) {
    const double th = std::isfinite(fam.support_upper()) ? 0.6 : 1.5;
    const EwpsParams q(EwParams(0.7, 1.2, 2.0), fam, th);
    for (double y : {0.3, 1.0, 2.0}) {
      auto [sv, hz] = ewps_survival_hazard(q, y);
      REQUIRE_THAT(hz * sv, Catch::Matchers::WithinRel(ewps_pdf(q, y), 1e-12));
    }
  }
}

TEST_CASE("quantile round trips on all families") {
  const EwpsParams pg(EwParams(1, 1, 1), PowerSeries::geometric(), 0.5);
  REQUIRE_THAT(ewps_quantile(pg, 0.5), Catch::Matchers::WithinRel(std::log(3.0), 1e-13));
  REQUIRE(ewps_quantile(pg, 1e-9) < 1e-8);
  for (const auto& fam : {PowerSeries::geometric(), PowerSeries::poisson(),
                          PowerSeries::logarithmic(), PowerSeries::binomial(10)}) {
    const double th = std::isfinite(fam.support_upper()) ? 0.7 : 2.0;
    const EwpsParams p(EwParams(2, 0.5, 1.2), fam, th);
    for (double q : {0.01, 0.1, 0.5, 0.9, 0.99})
      REQUIRE_THAT(ewps_cdf(p, ewps_quantile(p, q)), Catch::Matchers::WithinAbs(q, 1e-10));
  }
  REQUIRE_THROWS_AS(ewps_quantile(pg, 0.0), domain_error);
  REQUIRE_THROWS_AS(ewps_quantile(pg, 1.0), domain_error);
}

TEST_CASE("pdf integrates to one across the family/shape grid") {
  for (const auto& fam : {PowerSeries::geometric(), PowerSeries::poisson(),
                          PowerSeries::logarithmic(), PowerSeries::binomial(5)}) {
    const double th = std::isfinite(fam.support_upper()) ? 0.5 : 1.0;
    for (auto [a, g] : {std::pair{0.5, 2.0}, std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
      const EwpsParams p(EwParams(a, 1.0, g), fam, th);
      const double mass = ewps_expect(p, [](double) { return 1.0; }, 1e-9);
      INFO(fam.name() << " a=" << a << " g=" << g);
      REQUIRE_THAT(mass, Catch::Matchers::WithinAbs(1.0, 1e-8));
    }
  }
}

TEST_CASE("sampling: determinism, degenerate compounding, and distributional equality") {
  const EwpsParams p(EwParams(2, 1, 1.5), PowerSeries::geometric(), 0.5);
  UniformStream s1(11), s2(11);
  REQUIRE(ewps_sample(p, s1, 50, SampleMethod::compound) ==
          ewps_sample(p, s2, 50, SampleMethod::compound));

  // N ≡ 1: the compound draw is a single EW draw
  const EwpsParams pb(EwParams(2, 1, 1.5), PowerSeries::binomial(1), 3.0);
  UniformStream s3(5), s4(5);
  const auto draws = ewps_sample(pb, s3, 20, SampleMethod::compound);
  std::vector<double> expect(20);
  for (auto& v : expect) {
    s4.next();  // the N draw consumes one uniform
    v = ew_quantile(pb.ew, s4.next());
  }
  REQUIRE(draws == expect);

  // inverse vs compound: two-sample K-S at the 1% level, n = 1e5 each
  UniformStream s5(123), s6(456);
  const auto xs = ewps_sample(p, s5, 100000, SampleMethod::inverse);
  const auto zs = ewps_sample(p, s6, 100000, SampleMethod::compound);
  const double d2 = testutil::ks_two_sample(xs, zs);
  REQUIRE(d2 < 1.6276 * std::sqrt(2.0 / 100000.0));

  // compound sampler vs the analytic cdf: one-sample K-S at the 1% level
  std::vector<double> u(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) u[i] = ewps_cdf(p, zs[i]);
  REQUIRE(testutil::ks_brute_force(u) < 1.6276 / std::sqrt(100000.0));
}

TEST_CASE("moments: series vs quadrature and the exponential limit") {
  const EwpsParams tiny(EwParams(1, 1, 1), PowerSeries::geometric(), 1e-12);
  REQUIRE_THAT(ewps_moment(tiny, 1, MomentMethod::series), Catch::Matchers::WithinAbs(1.0, 1e-6));
  const EwpsParams p(EwParams(1, 1, 1), PowerSeries::geometric(), 0.5);
  const double q1 = ewps_moment(p, 1, MomentMethod::quadrature);
  REQUIRE_THAT(ewps_moment(p, 1, MomentMethod::series), Catch::Matchers::WithinRel(q1, 1e-10));
  REQUIRE_THAT(q1, Catch::Matchers::WithinRel(2.0 * std::log(2.0), 1e-10));
  const EwpsParams pp(EwParams(2, 1, 2), PowerSeries::poisson(), 1.0);
  const double hi = ewps_quantile(pp, 1.0 - 1e-14);
  const double oracle = testutil::integrate_oracle(
      [&](double y) { return y > 0 ? y * y * ewps_pdf(pp, y) : 0.0; }, 1e-300, hi, 1e-10);
  REQUIRE_THAT(ewps_moment(pp, 2, MomentMethod::quadrature),
               Catch::Matchers::WithinRel(oracle, 1e-8));
  REQUIRE_THAT(ewps_moment(pp, 2, MomentMethod::series),
               Catch::Matchers::WithinRel(oracle, 1e-5));
  REQUIRE_THROWS_AS(ewps_moment(p, 0), domain_error);
}

TEST_CASE("mgf: value at zero, quadrature oracle, Taylor consistency, domain") {
  const EwpsParams p(EwParams(1, 1, 1), PowerSeries::geometric(), 0.5);
  REQUIRE(ewps_mgf(p, 0.0) == 1.0);
  const double hi = ewps_quantile(p, 1.0 - 1e-14);
  const double oracle = testutil::integrate_oracle(
      [&](double y) { return y > 0 ? std::exp(-y) * ewps_pdf(p, y) : 0.0; }, 1e-300, hi, 1e-11);
  REQUIRE_THAT(ewps_mgf(p, -1.0), Catch::Matchers::WithinRel(oracle, 1e-9));
  const double t = 1e-4;
  const double mean = ewps_moment(p, 1);
  REQUIRE_THAT(ewps_mgf(p, t), Catch::Matchers::WithinAbs(1.0 + t * mean, 5 * t * t));
  REQUIRE_THROWS_AS(ewps_mgf(EwpsParams(EwParams(1, 1, 0.5), PowerSeries::geometric(), 0.5), 0.1),
                    domain_error);
  // series route agrees inside its radius and reports divergence outside
  REQUIRE_THAT(ewps_mgf_series(p, -0.3), Catch::Matchers::WithinRel(ewps_mgf(p, -0.3), 1e-9));
  REQUIRE_THROWS_AS(ewps_mgf_series(p, -5.0), convergence_error);
}

TEST_CASE("mean and variance") {
  const EwpsParams tiny(EwParams(1, 1, 1), PowerSeries::geometric(), 1e-12);
  auto [m0, v0] = ewps_mean_var(tiny);
  REQUIRE_THAT(m0, Catch::Matchers::WithinAbs(1.0, 1e-5));
  REQUIRE_THAT(v0, Catch::Matchers::WithinAbs(1.0, 1e-5));

  const EwpsParams p(EwParams(2, 1, 1), PowerSeries::geometric(), 0.5);
  auto [m, v] = ewps_mean_var(p);
  const double hi = ewps_quantile(p, 1.0 - 1e-14);
  const double m_o = testutil::integrate_oracle(
      [&](double y) { return y > 0 ? y * ewps_pdf(p, y) : 0.0; }, 1e-300, hi, 1e-10);
  const double m2_o = testutil::integrate_oracle(
      [&](double y) { return y > 0 ? y * y * ewps_pdf(p, y) : 0.0; }, 1e-300, hi, 1e-10);
  REQUIRE_THAT(m, Catch::Matchers::WithinRel(m_o, 1e-8));
  REQUIRE_THAT(v, Catch::Matchers::WithinRel(m2_o - m_o * m_o, 1e-7));
  REQUIRE(v > 0);

  const EwpsParams p2(EwParams(2, 2, 1), PowerSeries::geometric(), 0.5);
  auto [m2, v2] = ewps_mean_var(p2);
  REQUIRE_THAT(m2, Catch::Matchers::WithinRel(m / 2.0, 1e-9));
  REQUIRE_THAT(v2, Catch::Matchers::WithinRel(v / 4.0, 1e-8));
}

TEST_CASE("mixture representation converges to the pdf") {
  const EwpsParams pb(EwParams(1.3, 1, 1.1), PowerSeries::binomial(1), 2.0);
  REQUIRE_THAT(mixture_pdf(pb, 0.7, 1), Catch::Matchers::WithinRel(ewps_pdf(pb, 0.7), 1e-13));
  const EwpsParams p(EwParams(2, 1, 1.5), PowerSeries::geometric(), 0.5);
  REQUIRE_THAT(mixture_pdf(p, 1.0, 200), Catch::Matchers::WithinRel(ewps_pdf(p, 1.0), 1e-10));
  REQUIRE_THROWS_AS(mixture_pdf(p, 1.0, 0), domain_error);
}

TEST_CASE("min-compounded cdf: closed form, boundary, and Monte-Carlo") {
  const EwpsParams p(EwParams(1, 1, 1), PowerSeries::geometric(), 0.5);
  REQUIRE(ewps_cdf_min(p, 0.0) == 0.0);
  for (double y : {0.2, 0.7, 1.5, 4.0}) {
    const double eg = 1.0 - 0.5 * std::exp(-y) / (1.0 - 0.5 * std::exp(-y));
    REQUIRE_THAT(ewps_cdf_min(p, y), Catch::Matchers::WithinRel(eg, 1e-13));
  }
  const EwpsParams pb(EwParams(1.5, 1, 1.2), PowerSeries::binomial(1), 2.0);
  for (double y : {0.2, 1.0}) {
    REQUIRE_THAT(ewps_cdf_min(pb, y), Catch::Matchers::WithinRel(ew_cdf(pb.ew, y), 1e-13));
  }

  // Monte-Carlo min-of-N draws vs the min-variant cdf, one-sample K-S at 1%
  const EwpsParams pm(EwParams(2, 1, 1.5), PowerSeries::poisson(), 2.0);
  UniformStream stream(31);
  const int n = 100000;
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    const int count = pm.family.sample(pm.theta, stream);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < count; ++j) best = std::min(best, ew_quantile(pm.ew, stream.next()));
    u[i] = ewps_cdf_min(pm, best);
  }
  REQUIRE(testutil::ks_brute_force(u) < 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("cdf is monotone on the model grid") {
  const EwpsParams p(EwParams(0.6, 1.4, 2.2), PowerSeries::logarithmic(), 0.8);
  double prev = 0.0;
  for (double y : model_grid(p)) {
    const double F = ewps_cdf(p, y);
    REQUIRE(F >= prev);
    prev = F;
  }
}

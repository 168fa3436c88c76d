#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "proclab/errors.hpp"
#include "proclab/gauss_num.hpp"
#include "proclab/marginal_laws.hpp"

using namespace proclab;
using namespace proclab::laws;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("marginal law of B(t)") {
  const HurstIndex h(0.3);
  CHECK(marginal_cdf(h, {1.0, 0.0}) == 0.5);
  CHECK(marginal_cdf(h, {2.0, std::pow(2.0, 0.3)}) == doctest::Approx(gauss::std_normal_cdf(1.0)).epsilon(1e-15));
  // point mass at 0 for t = 0
  CHECK(marginal_cdf(h, {0.0, -1e-300}) == 0.0);
  CHECK(marginal_cdf(h, {0.0, 0.0}) == 1.0);
  CHECK(marginal_cdf(h, {1.0, inf}) == 1.0);
  CHECK(marginal_cdf(h, {1.0, -inf}) == 0.0);
  CHECK_THROWS_AS(marginal_cdf(h, {-1.0, 0.0}), DomainError);

  CHECK(marginal_pdf(HurstIndex(0.5), {1.0, 0.0}) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(marginal_pdf(HurstIndex(0.5), {4.0, 2.0}) ==
        doctest::Approx(std::exp(-0.5) / (2.0 * std::sqrt(2.0 * std::numbers::pi))));
  CHECK_THROWS_AS(marginal_pdf(h, {0.0, 0.0}), DomainError);
}

TEST_CASE("quantiles of B(t)") {
  const HurstIndex h(0.7);
  for (double a : {0.05, 0.3, 0.5, 0.8}) {
    for (double t : {0.1, 1.0, 3.0}) {
      const double q = true_quantile(h, t, QuantileLevel(a));
      CHECK(marginal_cdf(h, {t, q}) == doctest::Approx(a).epsilon(1e-12));
      CHECK(density_quantile(h, t, QuantileLevel(a)) == doctest::Approx(marginal_pdf(h, {t, q})).epsilon(1e-13));
    }
  }
  CHECK(true_quantile(h, 0.0, QuantileLevel(0.9)) == 0.0);
  CHECK_THROWS_AS(QuantileLevel(0.0), DomainError);
  CHECK_THROWS_AS(QuantileLevel(1.0), DomainError);
}

TEST_CASE("pair correlation") {
  CHECK(pair_correlation(HurstIndex(0.3), 1.0, 2.0).value() ==
        doctest::Approx(0.61557220667245814225).epsilon(1e-15));
  CHECK(pair_correlation(HurstIndex(0.5), 1.0, 4.0).value() == doctest::Approx(0.5));
  CHECK(pair_correlation(HurstIndex(0.8), 2.0, 2.0).value() == doctest::Approx(1.0));
  CHECK_THROWS_AS(pair_correlation(HurstIndex(0.5), 0.0, 1.0), DomainError);
}

TEST_CASE("limit covariance kernel") {
  const HurstIndex bm(0.5);
  // variance at the median
  for (double h : {0.2, 0.5, 0.9}) CHECK(limit_cov_kernel(HurstIndex(h), {1.7, 0.0}, {1.7, 0.0}) == doctest::Approx(0.25));
  // Brownian orthant probability 1/3 at s/t = 1/4
  CHECK(limit_cov_kernel(bm, {1.0, 0.0}, {4.0, 0.0}) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  // F(1 - F) on the diagonal
  const double f = marginal_cdf(HurstIndex(0.3), {2.0, 0.7});
  CHECK(limit_cov_kernel(HurstIndex(0.3), {2.0, 0.7}, {2.0, 0.7}) == doctest::Approx(f * (1.0 - f)).epsilon(1e-13));
  // infinite levels degenerate; t = 0 is outside the domain
  CHECK(limit_cov_kernel(bm, {1.0, inf}, {2.0, 0.3}) == 0.0);
  CHECK(limit_cov_kernel(bm, {1.0, -inf}, {2.0, 0.3}) == 0.0);
  CHECK_THROWS_AS(limit_cov_kernel(bm, {0.0, 1.0}, {2.0, 0.3}), DomainError);
  // symmetric
  CHECK(limit_cov_kernel(HurstIndex(0.4), {0.5, -0.2}, {1.3, 0.9}) ==
        limit_cov_kernel(HurstIndex(0.4), {1.3, 0.9}, {0.5, -0.2}));
}

TEST_CASE("weighted kernel") {
  const HurstIndex h(0.4);
  const SpaceTimePoint p{0.5, 0.1}, q{1.5, -0.3};
  CHECK(weighted_cov_kernel(h, 0.4, p, q) ==
        doctest::Approx(std::pow(0.75, 0.4) * limit_cov_kernel(h, p, q)).epsilon(1e-14));
  CHECK(weighted_cov_kernel(h, 0.0, p, q) == limit_cov_kernel(h, p, q));
  CHECK(weighted_cov_kernel(h, 0.4, {0.0, 1.0}, q) == 0.0);
  CHECK_THROWS_AS(weighted_cov_kernel(h, -0.1, p, q), DomainError);
}

TEST_CASE("Swanson kernel is the scaled median covariance") {
  for (double t : {0.5, 1.0, 3.0}) CHECK(swanson_kernel(t, t) == doctest::Approx(t * std::numbers::pi / 2.0));
  CHECK(swanson_kernel(0.0, 2.0) == 0.0);
  const HurstIndex bm(0.5);
  for (auto [s, t] : {std::pair{1.0, 4.0}, {0.3, 0.7}, {2.0, 2.5}}) {
    const double scaled = 2.0 * std::numbers::pi * std::sqrt(s * t) * limit_cov_kernel(bm, {s, 0.0}, {t, 0.0});
    CHECK(swanson_kernel(s, t) == doctest::Approx(scaled).epsilon(1e-13));
  }
  CHECK_THROWS_AS(swanson_kernel(-1.0, 1.0), DomainError);
}

TEST_CASE("indicator distance") {
  const HurstIndex bm(0.5);
  CHECK(indicator_dp(bm, {1.0, 0.0}, {4.0, 0.0}) == doctest::Approx(0.57735026918962576451).epsilon(1e-14));
  CHECK(indicator_dp(bm, {1.0, 0.3}, {1.0, 0.3}) == doctest::Approx(0.0).epsilon(1e-7));
  // same time: d^2 = |F(x) - F(y)|
  const HurstIndex h(0.3);
  const double d2 = marginal_cdf(h, {2.0, 1.0}) - marginal_cdf(h, {2.0, -0.5});
  CHECK(indicator_dp(h, {2.0, 1.0}, {2.0, -0.5}) == doctest::Approx(std::sqrt(d2)).epsilon(1e-12));
  // triangle inequality on a few points
  const SpaceTimePoint a{0.5, 0.1}, b{1.0, -0.2}, c{1.8, 0.6};
  CHECK(indicator_dp(h, a, c) <= indicator_dp(h, a, b) + indicator_dp(h, b, c) + 1e-12);
}

#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "proclab/errors.hpp"
#include "proclab/rate_calc.hpp"

using namespace proclab;
using namespace proclab::rates;

TEST_CASE("base exponents") {
  const auto b = base_exponents(HurstIndex(0.5));
  CHECK(b.nu0 == 6.0);
  CHECK(b.h0 == 1.5);
  CHECK(b.tau2 == doctest::Approx(14.0 / 13.0).epsilon(1e-15));
  CHECK(base_exponents(HurstIndex(0.25)).tau2 == doctest::Approx(1.1428571428571428571).epsilon(1e-15));
  // tau2 decreases in H
  double prev = 1e9;
  for (int i = 1; i <= 99; ++i) {
    const double t = base_exponents(HurstIndex(i / 100.0)).tau2;
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("tau1 and its weighted counterpart") {
  const HurstIndex h(0.5);
  CHECK(tau1(h, 0.0) == doctest::Approx(1.0 / 26.0).epsilon(1e-15));
  CHECK(tau1(h, 1.0 / 12.0) == doctest::Approx(1.0 / 52.0).epsilon(1e-15));
  CHECK_THROWS_AS(tau1(h, 1.0 / 6.0), DomainError);
  CHECK_THROWS_AS(tau1(h, -1e-9), DomainError);
  CHECK(tau1_prime(HurstIndex(0.3), 0.3) == doctest::Approx(0.018518518518518518519).epsilon(1e-15));
  CHECK(tau1_prime(h, 0.5) == doctest::Approx(1.0 / 38.0).epsilon(1e-15));
  CHECK(eta_star(h, 0.5) == doctest::Approx(1.0 / 19.0).epsilon(1e-15));
  CHECK_THROWS_AS(tau1_prime(h, 0.0), DomainError);
  CHECK_THROWS_AS(eta_star(h, INFINITY), DomainError);
  // eta* balances the two rates
  for (double hv : {0.1, 0.4, 0.9}) {
    for (double k : {0.05, 0.5, 3.0}) {
      const double e = eta_star(HurstIndex(hv), k);
      CHECK(tau1(HurstIndex(hv), e) == doctest::Approx(k * e).epsilon(1e-13));
      CHECK(tau1_prime(HurstIndex(hv), k) == doctest::Approx(k * e).epsilon(1e-13));
    }
  }
}

TEST_CASE("rates in alpha") {
  const HurstIndex h(0.5);
  const auto r = theorem_rates(h, 20.0, 0.0);
  REQUIRE(r.tau_alpha.has_value());
  CHECK_FALSE(r.tau_prime_alpha.has_value());
  CHECK(*r.tau_alpha == doctest::Approx(0.012820512820512820513).epsilon(1e-14));
  CHECK_THROWS_AS(theorem_rates(h, 5.0, 0.0), DomainError);
  CHECK_THROWS_AS(theorem_rates(h, 26.0, 0.0), DomainError);
  // the weighted window (19, 38) at kappa = 1/2
  const auto w = theorem_rates(h, 30.0, 0.5);
  CHECK_FALSE(w.tau_alpha.has_value());
  REQUIRE(w.tau_prime_alpha.has_value());
  CHECK(*w.tau_prime_alpha == doctest::Approx((30.0 / 38.0 - 0.5) / 31.0));
  for (double hv : {0.1, 0.5, 0.9}) {
    const double r0 = tau1(HurstIndex(hv), 0.0);
    for (double f = 0.51; f < 1.0; f += 0.07) {
      const double v = *theorem_rates(HurstIndex(hv), f / r0, 0.0).tau_alpha;
      CHECK(v > 0.0);
      CHECK(v < 0.25);
    }
  }
}

TEST_CASE("corollary rates and tie bound") {
  const auto c = corollary_rates(HurstIndex(0.5), 0.01);
  CHECK(c.mu == doctest::Approx(0.5 / 6.0 - 0.01).epsilon(1e-15));
  CHECK(c.m_ties == 10);
  CHECK(tie_bound(HurstIndex(0.3)) == 16);
  CHECK(tie_bound(HurstIndex(0.25)) == 18);
  CHECK(tie_bound(HurstIndex(2.0 / 3.0)) == 8);
  CHECK_THROWS_AS(corollary_rates(HurstIndex(0.5), 0.5 / 6.0), DomainError);
  CHECK_THROWS_AS(corollary_rates(HurstIndex(0.5), 0.01, 0.5), DomainError);
}

TEST_CASE("sequence scales") {
  const auto s = sequence_scales(HurstIndex(0.5), 0.1, 1e4);
  CHECK(s.eps_n == doctest::Approx(0.12206867360529750395).epsilon(1e-14));
  CHECK(s.bk_rate == doctest::Approx(0.37046063395347794959).epsilon(1e-14));
  CHECK(s.a_n == doctest::Approx(5.3961561856368573787e-19).epsilon(1e-12));
  // gamma_n < 1 inflates eps_n by gamma_n^{-H/2 - delta}
  const auto g = sequence_scales(HurstIndex(0.5), 0.1, 1e4, 1.0, 0.25);
  CHECK(g.eps_n == doctest::Approx(s.eps_n * std::pow(0.25, -0.35)).epsilon(1e-14));
  CHECK_THROWS_AS(sequence_scales(HurstIndex(0.5), 0.1, 15.0), DomainError);
  CHECK_THROWS_AS(sequence_scales(HurstIndex(0.5), 0.1, 1e4, 1.0, 1.5), DomainError);
}

TEST_CASE("crossover index") {
  const HurstIndex h(0.5);
  auto below = [](double delta, double eta, double c, double n) {
    return c * std::pow(std::log(std::log(n)) / n, 1.0 / (2.0 * delta)) < std::pow(n, -eta);
  };
  for (double delta : {0.1, 0.5, 1.0}) {
    for (double c : {1.0, 1e3}) {
      const auto n = crossover_index(h, delta, 0.1, c);
      REQUIRE(n.has_value());
      const double nn = static_cast<double>(*n);
      CHECK(below(delta, 0.1, c, nn));
      if (*n > 16) CHECK_FALSE(below(delta, 0.1, c, nn - 1));
      for (double later = nn; later < nn * 1e6; later *= 3.7) CHECK(below(delta, 0.1, c, later));
    }
  }
  // a_n decays slower than n^{-eta}
  CHECK_FALSE(crossover_index(h, 10.0, 0.1).has_value());
  CHECK_FALSE(crossover_index(h, 3.0, 0.1, 1e200, 1e6).has_value());
  CHECK_THROWS_AS(crossover_index(h, 0.1, 0.2), DomainError);
}

TEST_CASE("rate table") {
  std::ostringstream out;
  write_rate_table({rate_row(HurstIndex(0.5), 0.5, 0.01), rate_row(HurstIndex(0.1), 0.0, 0.5)}, out);
  std::istringstream in(out.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "h,nu0,h0,tau2,tau1_at_0,tau1p(kappa),eta_star,mu(delta),m");
  CHECK(first.rfind("0.5,6,1.5,", 0) == 0);
  CHECK(first.substr(first.size() - 3) == ",10");
  CHECK(second.find(",NA,NA,NA,") != std::string::npos);
}

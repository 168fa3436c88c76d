#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "proclab/fbm_engine.hpp"

// Exponents and scales of the strong approximation and Bahadur-Kiefer rates.
namespace proclab::rates {

using fbm::HurstIndex;

struct BaseExponents {
  double nu0 = 0;   // 2 + 2/H
  double h0 = 0;    // 1 + H
  double tau2 = 0;  // 3(2 + H) / (10H + 8) + 1/2
};

BaseExponents base_exponents(HurstIndex h);

// (1 - 4 H0 eta) / (2 + 4 nu0) on 0 <= eta < 1/(4 H0); eta = 0 included.
double tau1(HurstIndex h, double eta);

// kappa / (4 H0 + kappa (2 + 4 nu0)), kappa > 0.
double tau1_prime(HurstIndex h, double kappa);

// The eta solving tau1(eta) = kappa eta.
double eta_star(HurstIndex h, double kappa);

// Absent when alpha is outside the open window (1/(2 r), 1/r) of the
// respective base rate r = tau1(0) or tau1_prime(kappa).
struct TheoremRates {
  std::optional<double> tau_alpha;
  std::optional<double> tau_prime_alpha;
};

// Throws DomainError when alpha lies in neither window.
TheoremRates theorem_rates(HurstIndex h, double alpha, double kappa);

struct CorollaryRates {
  double mu = 0;   // H / (4 H0) - delta
  int m_ties = 0;  // 2 (ceil(2/H) + 1)
};

// 0 < delta < H / (4 H0); rho is the quantile band level in (0, 1/2).
CorollaryRates corollary_rates(HurstIndex h, double delta, double rho = 0.2);

int tie_bound(HurstIndex h);

struct SequenceScales {
  double a_n = 0;      // C (log log n / n)^{1/(2 delta)}
  double eps_n = 0;    // c7 gamma_n^{-H/2 - delta} (log log n / n)^{1/4}
  double bk_rate = 0;  // n^{-1/4} gamma_n^{-H/2 - delta} (log log n)^{1/4} (log n)^{1/2}
};

// n >= 16, gamma_n in (0, 1]; C and c7 are scale constants.
SequenceScales sequence_scales(HurstIndex h, double delta, double n, double c_const = 1.0,
                               double gamma_n = 1.0, double c7 = 1.0);

// Smallest n >= 16 from which on a_n(delta) < n^{-eta}. nullopt when not
// reached by n_max.
std::optional<std::uint64_t> crossover_index(HurstIndex h, double delta, double eta,
                                             double c_const = 1.0, double n_max = 1e300);

struct RateTableRow {
  double h = 0;
  BaseExponents base;
  double tau1_at_0 = 0;
  std::optional<double> tau1p;
  std::optional<double> eta_star;
  std::optional<double> mu;
  int m = 0;
};

RateTableRow rate_row(HurstIndex h, double kappa, double delta);

// `h,nu0,h0,tau2,tau1_at_0,tau1p(kappa),eta_star,mu(delta),m`, NA where a
// value is outside its domain.
void write_rate_table(const std::vector<RateTableRow>& rows, std::ostream& out);

}  // namespace proclab::rates

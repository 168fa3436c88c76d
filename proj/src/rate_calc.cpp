#include "proclab/rate_calc.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "proclab/errors.hpp"

namespace proclab::rates {

namespace {

double base_rate_denominator(const BaseExponents& b) { return 2.0 + 4.0 * b.nu0; }

std::optional<double> rate_in_window(double alpha, double r) {
  if (!(alpha > 1.0 / (2.0 * r) && alpha < 1.0 / r)) return std::nullopt;
  return (alpha * r - 0.5) / (1.0 + alpha);
}

double loglog(double n) { return std::log(std::log(n)); }

}  // namespace

BaseExponents base_exponents(HurstIndex h) {
  const double hv = h.value();
  if (!(hv > 0.0 && hv < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
  return {2.0 + 2.0 / hv, 1.0 + hv, 3.0 * (2.0 + hv) / (10.0 * hv + 8.0) + 0.5};
}

double tau1(HurstIndex h, double eta) {
  const auto b = base_exponents(h);
  if (!(eta >= 0.0 && eta < 1.0 / (4.0 * b.h0)))
    throw DomainError("tau1: eta must lie in [0, 1/(4 H0))");
  return (1.0 - 4.0 * b.h0 * eta) / base_rate_denominator(b);
}

double tau1_prime(HurstIndex h, double kappa) {
  const auto b = base_exponents(h);
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("tau1_prime: kappa must be positive");
  return kappa / (4.0 * b.h0 + kappa * base_rate_denominator(b));
}

double eta_star(HurstIndex h, double kappa) {
  const auto b = base_exponents(h);
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("eta_star: kappa must be positive");
  return 1.0 / (4.0 * b.h0 + kappa * base_rate_denominator(b));
}

TheoremRates theorem_rates(HurstIndex h, double alpha, double kappa) {
  TheoremRates out;
  out.tau_alpha = rate_in_window(alpha, tau1(h, 0.0));
  if (kappa > 0.0) out.tau_prime_alpha = rate_in_window(alpha, tau1_prime(h, kappa));
  if (!out.tau_alpha && !out.tau_prime_alpha)
    throw DomainError("theorem_rates: alpha outside both admissible windows");
  return out;
}

int tie_bound(HurstIndex h) {
  return 2 * (static_cast<int>(std::ceil(2.0 / h.value() - 1e-12)) + 1);
}

CorollaryRates corollary_rates(HurstIndex h, double delta, double rho) {
  const auto b = base_exponents(h);
  if (!(rho > 0.0 && rho < 0.5)) throw DomainError("corollary_rates: rho must lie in (0, 1/2)");
  const double cap = h.value() / (4.0 * b.h0);
  if (!(delta > 0.0 && delta < cap)) throw DomainError("corollary_rates: delta must lie in (0, H/(4 H0))");
  return {cap - delta, tie_bound(h)};
}

SequenceScales sequence_scales(HurstIndex h, double delta, double n, double c_const, double gamma_n,
                               double c7) {
  base_exponents(h);
  if (!(n >= 16.0)) throw DomainError("sequence_scales: n must be >= 16");
  if (!(delta > 0.0)) throw DomainError("sequence_scales: delta must be positive");
  if (!(gamma_n > 0.0 && gamma_n <= 1.0)) throw DomainError("sequence_scales: gamma_n must lie in (0, 1]");
  const double ll = loglog(n);
  const double gpow = std::pow(gamma_n, -h.value() / 2.0 - delta);
  SequenceScales s;
  s.a_n = c_const * std::pow(ll / n, 1.0 / (2.0 * delta));
  s.eps_n = c7 * gpow * std::pow(ll / n, 0.25);
  s.bk_rate = std::pow(n, -0.25) * gpow * std::pow(ll, 0.25) * std::sqrt(std::log(n));
  return s;
}

std::optional<std::uint64_t> crossover_index(HurstIndex h, double delta, double eta, double c_const,
                                             double n_max) {
  const auto b = base_exponents(h);
  if (!(eta > 0.0 && eta < 1.0 / (4.0 * b.h0))) throw DomainError("crossover_index: eta must lie in (0, 1/(4 H0))");
  if (!(delta > 0.0) || !(c_const > 0.0)) throw DomainError("crossover_index: delta and C must be positive");
  if (!(1.0 / (2.0 * delta) > eta)) return std::nullopt;
  // log a_n + eta log n, negative exactly when a_n < n^{-eta}. Its slope in
  // log n decreases, so it rises (perhaps) and then falls for good.
  auto gap = [&](double n) {
    return std::log(c_const) + (std::log(loglog(n)) - std::log(n)) / (2.0 * delta) + eta * std::log(n);
  };
  auto slope = [&](double n) {
    const double l = std::log(n);
    return (1.0 / (l * std::log(l)) - 1.0) / (2.0 * delta) + eta;
  };
  double turn = 16.0;
  while (slope(turn) > 0.0) turn *= 2.0;
  if (gap(turn) < 0.0) return 16;
  double lo = turn, hi = turn * 2.0;
  while (gap(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > n_max || hi > 1.8e19) return std::nullopt;
  }
  while (hi - lo > 1.0) {
    const double mid = std::floor((lo + hi) / 2.0);
    (gap(mid) >= 0.0 ? lo : hi) = mid;
  }
  return static_cast<std::uint64_t>(hi);
}

RateTableRow rate_row(HurstIndex h, double kappa, double delta) {
  RateTableRow row;
  row.h = h.value();
  row.base = base_exponents(h);
  row.tau1_at_0 = tau1(h, 0.0);
  if (kappa > 0.0) {
    row.tau1p = tau1_prime(h, kappa);
    row.eta_star = eta_star(h, kappa);
  }
  if (delta > 0.0 && delta < h.value() / (4.0 * row.base.h0)) row.mu = corollary_rates(h, delta).mu;
  row.m = tie_bound(h);
  return row;
}

void write_rate_table(const std::vector<RateTableRow>& rows, std::ostream& out) {
  out << "h,nu0,h0,tau2,tau1_at_0,tau1p(kappa),eta_star,mu(delta),m\n";
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string("NA"); };
  for (const auto& r : rows) {
    out << num(r.h) << ',' << num(r.base.nu0) << ',' << num(r.base.h0) << ',' << num(r.base.tau2) << ','
        << num(r.tau1_at_0) << ',' << opt(r.tau1p) << ',' << opt(r.eta_star) << ',' << opt(r.mu) << ','
        << r.m << '\n';
  }
}

}  // namespace proclab::rates

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "proclab/fbm_engine.hpp"
#include "proclab/marginal_laws.hpp"

namespace proclab::empirical {

using fbm::FbmEnsemble;
using fbm::HurstIndex;
using laws::QuantileLevel;

// [gamma, t_max] x R with quantile band [rho, 1 - rho]; kappa > 0 selects the
// t^kappa weighted statistics.
struct EvalWindow {
  double gamma = 0.25;
  double t_max = 2.0;
  double rho = 0.2;
  double kappa = 0.0;

  void validate() const;
  bool contains(double t) const;
};

struct SupStatistic {
  double value = 0;
  double argmax_t = 0;
  double argmax_x_or_alpha = 0;
};

double empirical_cdf(const FbmEnsemble& ens, double t, double x);

// v_n(t, x) = sqrt(n) (F_n(t, x) - F(t, x)), t > 0.
double empirical_process(const FbmEnsemble& ens, double t, double x);

// sup over window grid times and all real x of t^kappa |v_n(t, x)|, computed
// exactly at the order statistics of each cross-section.
SupStatistic sup_vn(const FbmEnsemble& ens, const EvalWindow& w);

// Rank ceil(alpha n) clamped to [1, n]; the single rounding rule used by every
// quantile computation here.
std::size_t quantile_rank(double alpha, std::size_t n);

// inf{x : F_n(t, x) >= alpha}, the ceil(alpha n)-th order statistic.
double empirical_quantile(const FbmEnsemble& ens, double t, QuantileLevel a);

// u_n(t, alpha) = sqrt(n) (tau^n_alpha(t) - tau_alpha(t)), t > 0.
double quantile_process(const FbmEnsemble& ens, double t, QuantileLevel a);

// Sample median M_n(t) (rank (n + 1) / 2). Requires odd n.
double median_process(const FbmEnsemble& ens, double t);

// `count` equispaced levels spanning [rho, 1 - rho].
std::vector<double> alpha_grid(double rho, std::size_t count = 99);

// sup over window grid times and the alpha grid of the Bahadur-Kiefer
// remainder |v_n(t, tau_alpha(t)) + f(t, tau_alpha(t)) u_n(t, alpha)|.
// With w.kappa > 0 (which must equal H) the weighted form
// |t^H v_n(t, tau_alpha(t)) + phi(z_alpha) u_n(t, alpha)| is used instead.
SupStatistic bk_remainder(const FbmEnsemble& ens, const EvalWindow& w,
                          std::size_t alpha_count = 99);

struct Prop3Violation {
  double t = 0;
  double alpha = 0;
  std::size_t count = 0;  // n F_n(t, tau^n_alpha(t))
  std::size_t rank = 0;   // ceil(alpha n)
};

struct Prop3Report {
  std::size_t checks = 0;
  std::size_t identity_violations = 0;  // count != rank
  std::size_t bound_violations = 0;     // outside [alpha n, alpha n + m]
  std::size_t ties = 0;                 // cross-sections holding tied values
  int m = 0;
  std::vector<Prop3Violation> examples;  // first few offending cases

  bool ok() const { return identity_violations == 0 && bound_violations == 0; }
};

// Checks F_n(t, tau^n_alpha(t)) = ceil(alpha n) / n and
// 0 <= F_n(t, tau^n_alpha(t)) - alpha <= m / n, m = 2(ceil(2/H) + 1), at every
// positive window grid time and alpha-grid level.
Prop3Report prop3_check(const FbmEnsemble& ens, const EvalWindow& w, std::size_t alpha_count = 99);

// |g(s) - g(t)| <= K f_H(|s - t|) for every pair of grid times.
bool holder_membership(std::span<const double> path, const fbm::TimeGrid& grid, double k_const,
                       HurstIndex h);

}  // namespace proclab::empirical

#pragma once

#include "proclab/fbm_engine.hpp"
#include "proclab/gauss_num.hpp"

// Closed-form marginal laws of fBM and the covariance kernels of the
// limiting Gaussian field G(t, x) of the time-dependent empirical process.
namespace proclab::laws {

using fbm::HurstIndex;
using gauss::Correlation;

struct SpaceTimePoint {
  double t = 0;
  double x = 0;
};

class QuantileLevel {
 public:
  explicit QuantileLevel(double alpha);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

// F(t, x) = Phi(x / t^H); at t = 0 the law is a point mass at 0.
double marginal_cdf(HurstIndex h, SpaceTimePoint p);

// f(t, x) = exp(-x^2 / (2 t^{2H})) / (t^H sqrt(2 pi)), t > 0.
double marginal_pdf(HurstIndex h, SpaceTimePoint p);

// tau_alpha(t) = t^H z_alpha.
double true_quantile(HurstIndex h, double t, QuantileLevel a);

// f(t, tau_alpha(t)) = exp(-z_alpha^2 / 2) / (t^H sqrt(2 pi)), t > 0.
double density_quantile(HurstIndex h, double t, QuantileLevel a);

// Correlation of B(s) and B(t), s, t > 0.
Correlation pair_correlation(HurstIndex h, double s, double t);

// E G(p) G(q) = P{B(s) <= x, B(t) <= y} - F(s, x) F(t, y).
double limit_cov_kernel(HurstIndex h, SpaceTimePoint p, SpaceTimePoint q);

// s^kappa t^kappa E G(p) G(q); zero when either time is 0.
double weighted_cov_kernel(HurstIndex h, double kappa, SpaceTimePoint p, SpaceTimePoint q);

// Covariance of the scaled-median limit: sqrt(t1 t2) asin(min / sqrt(t1 t2)).
double swanson_kernel(double t1, double t2);

// L2(P) distance between the indicators 1{B(s) <= x} and 1{B(t) <= y}.
double indicator_dp(HurstIndex h, SpaceTimePoint p, SpaceTimePoint q);

}  // namespace proclab::laws

#include "proclab/marginal_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "proclab/errors.hpp"

namespace proclab::laws {

namespace {

void require_positive_time(double t, const char* what) {
  if (!(t > 0.0)) throw DomainError(std::string(what) + ": time must be positive");
}

// P{B(s) <= x, B(t) <= y} with the point mass at t = 0 handled exactly.
double joint_cdf(HurstIndex h, SpaceTimePoint p, SpaceTimePoint q) {
  if (p.t == 0.0) return (p.x >= 0.0 ? 1.0 : 0.0) * marginal_cdf(h, q);
  if (q.t == 0.0) return (q.x >= 0.0 ? 1.0 : 0.0) * marginal_cdf(h, p);
  const double hv = h.value();
  return gauss::bvn_cdf(p.x / std::pow(p.t, hv), q.x / std::pow(q.t, hv),
                        pair_correlation(h, p.t, q.t));
}

}  // namespace

QuantileLevel::QuantileLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("quantile level outside (0, 1)");
}

double marginal_cdf(HurstIndex h, SpaceTimePoint p) {
  if (p.t < 0.0) throw DomainError("marginal_cdf: negative time");
  if (p.t == 0.0) return p.x >= 0.0 ? 1.0 : 0.0;
  return gauss::cdf_saturating(p.x / std::pow(p.t, h.value()));
}

double marginal_pdf(HurstIndex h, SpaceTimePoint p) {
  require_positive_time(p.t, "marginal_pdf");
  const double scale = std::pow(p.t, h.value());
  const double z = p.x / scale;
  return std::exp(-0.5 * z * z) / (scale * std::sqrt(2.0 * std::numbers::pi));
}

double true_quantile(HurstIndex h, double t, QuantileLevel a) {
  if (t < 0.0) throw DomainError("true_quantile: negative time");
  if (a.value() == 0.5) return 0.0;
  return std::pow(t, h.value()) * gauss::std_normal_quantile(a.value());
}

double density_quantile(HurstIndex h, double t, QuantileLevel a) {
  require_positive_time(t, "density_quantile");
  const double z = gauss::std_normal_quantile(a.value());
  return std::exp(-0.5 * z * z) / (std::pow(t, h.value()) * std::sqrt(2.0 * std::numbers::pi));
}

Correlation pair_correlation(HurstIndex h, double s, double t) {
  require_positive_time(s, "pair_correlation");
  require_positive_time(t, "pair_correlation");
  if (s == t) return Correlation(1.0);
  double r = fbm::fbm_cov(h, s, t) / (std::pow(s, h.value()) * std::pow(t, h.value()));
  return Correlation(std::clamp(r, -1.0, 1.0));
}

double limit_cov_kernel(HurstIndex h, SpaceTimePoint p, SpaceTimePoint q) {
  require_positive_time(p.t, "limit_cov_kernel");
  require_positive_time(q.t, "limit_cov_kernel");
  if (p.t == q.t && p.x == q.x) {
    const double f = marginal_cdf(h, p);
    return f * (1.0 - f);
  }
  return joint_cdf(h, p, q) - marginal_cdf(h, p) * marginal_cdf(h, q);
}

double weighted_cov_kernel(HurstIndex h, double kappa, SpaceTimePoint p, SpaceTimePoint q) {
  if (!(kappa >= 0.0)) throw DomainError("weighted_cov_kernel: kappa must be >= 0");
  if (p.t < 0.0 || q.t < 0.0) throw DomainError("weighted_cov_kernel: negative time");
  if (p.t == 0.0 || q.t == 0.0) return 0.0;
  const double weight = kappa == 0.0 ? 1.0 : std::pow(p.t * q.t, kappa);
  return weight * limit_cov_kernel(h, p, q);
}

double swanson_kernel(double t1, double t2) {
  if (t1 < 0.0 || t2 < 0.0) throw DomainError("swanson_kernel: negative time");
  if (t1 == 0.0 || t2 == 0.0) return 0.0;
  const double root = std::sqrt(t1 * t2);
  return root * std::asin(std::min(1.0, std::min(t1, t2) / root));
}

double indicator_dp(HurstIndex h, SpaceTimePoint p, SpaceTimePoint q) {
  require_positive_time(p.t, "indicator_dp");
  require_positive_time(q.t, "indicator_dp");
  if (p.t == q.t && p.x == q.x) return 0.0;
  double sq;
  if (p.t == q.t) {
    sq = std::abs(marginal_cdf(h, p) - marginal_cdf(h, q));
  } else {
    sq = marginal_cdf(h, p) + marginal_cdf(h, q) - 2.0 * joint_cdf(h, p, q);
  }
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace proclab::laws

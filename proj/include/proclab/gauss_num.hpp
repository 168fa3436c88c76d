#pragma once

namespace proclab::gauss {

// Correlation coefficient of a standard bivariate normal pair.
class Correlation {
 public:
  explicit Correlation(double rho);
  double value() const noexcept { return rho_; }

 private:
  double rho_;
};

// Phi(z). Throws DomainError for non-finite z.
double std_normal_cdf(double z);

// Standard normal density. Throws DomainError for non-finite z.
double std_normal_pdf(double z);

// z with Phi(z) = alpha, 0 < alpha < 1 (AS241 initial guess, one Newton step).
double std_normal_quantile(double alpha);

// P{Z1 <= x, Z2 <= y} for a standard bivariate normal with correlation rho.
// Infinite limits are accepted and saturate.
double bvn_cdf(double x, double y, Correlation rho);

// P{Z1 <= 0, Z2 <= 0} = 1/4 + asin(rho) / (2 pi).
double orthant_negative(Correlation rho);

// Phi extended to the closed real line: Phi(-inf) = 0, Phi(+inf) = 1.
double cdf_saturating(double z);

}  // namespace proclab::gauss

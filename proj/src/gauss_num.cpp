#include "proclab/gauss_num.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "proclab/errors.hpp"

namespace proclab::gauss {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_finite(double z, const char* what) {
  if (!std::isfinite(z)) throw DomainError(std::string(what) + ": non-finite argument");
}

// Positive half of an n-point Gauss-Legendre rule on [-1, 1].
struct HalfRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

HalfRule gauss_legendre_half(int n) {
  HalfRule rule;
  for (int i = 1; i <= n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

const HalfRule& rule_for(double abs_r) {
  static const std::array<HalfRule, 3> rules = {gauss_legendre_half(6), gauss_legendre_half(12),
                                                gauss_legendre_half(20)};
  if (abs_r < 0.3) return rules[0];
  if (abs_r < 0.75) return rules[1];
  return rules[2];
}

// Upper orthant P{Z1 > h, Z2 > k} for finite h, k and |r| < 1 (Genz BVNU).
double bvn_upper(double h, double k, double r) {
  const HalfRule& rule = rule_for(std::abs(r));
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    double hs = (h * h + k * k) / 2.0;
    double asr = std::asin(r) / 2.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        double sn = std::sin(asr * (1.0 + sign * rule.nodes[i]));
        bvn += rule.weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / kTwoPi + cdf_saturating(-h) * cdf_saturating(-k);
  }

  if (r < 0) {
    k = -k;
    hk = -hk;
  }
  double as = (1.0 - r) * (1.0 + r);
  double a = std::sqrt(as);
  double bs = (h - k) * (h - k);
  double c = (4.0 - hk) / 8.0;
  double d = (12.0 - hk) / 80.0;
  double asr = -(bs / as + hk) / 2.0;
  if (asr > -100.0) {
    bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
  }
  if (hk > -100.0) {
    double b = std::sqrt(bs);
    double sp = std::sqrt(kTwoPi) * cdf_saturating(-b / a);
    bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
  }
  a /= 2.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      double xs = a * (1.0 + sign * rule.nodes[i]);
      xs *= xs;
      double rs = std::sqrt(1.0 - xs);
      double ex = -(bs / xs + hk) / 2.0;
      if (ex > -100.0) {
        double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
        double ep = std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
        bvn += a * rule.weights[i] * std::exp(ex) * (ep - sp);
      }
    }
  }
  bvn = -bvn / kTwoPi;

  if (r > 0) return bvn + cdf_saturating(-std::max(h, k));
  bvn = -bvn;
  if (k > h) {
    bvn += (h < 0) ? cdf_saturating(k) - cdf_saturating(h)
                   : cdf_saturating(-h) - cdf_saturating(-k);
  }
  return bvn;
}

}  // namespace

Correlation::Correlation(double rho) : rho_(rho) {
  if (!(std::abs(rho) <= 1.0)) throw DomainError("correlation outside [-1, 1]");
}

double cdf_saturating(double z) {
  if (std::isnan(z)) throw DomainError("std_normal_cdf: NaN argument");
  return 0.5 * std::erfc(-z * kInvSqrt2);
}

double std_normal_cdf(double z) {
  require_finite(z, "std_normal_cdf");
  return 0.5 * std::erfc(-z * kInvSqrt2);
}

double std_normal_pdf(double z) {
  require_finite(z, "std_normal_pdf");
  return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
}

double std_normal_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("std_normal_quantile: alpha outside (0, 1)");

  // Wichura, Algorithm AS 241 (PPND16).
  constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                          1.9715909503065514427e+3, 1.3731693765509461125e+4,
                          4.5921953931549871457e+4, 6.7265770927008700853e+4,
                          3.3430575583588128105e+4, 2.5090809287301226727e+3};
  constexpr double b[] = {1.0,
                          4.2313330701600911252e+1, 6.8718700749205790830e+2,
                          5.3941960214247511077e+3, 2.1213794301586595867e+4,
                          3.9307895800092710610e+4, 2.8729085735721942674e+4,
                          5.2264952788528545610e+3};
  constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                          5.76949722146069140550e0, 3.64784832476320460504e0,
                          1.27045825245236838258e0, 2.41780725177450611770e-1,
                          2.27238449892691845833e-2, 7.74545014278341407640e-4};
  constexpr double d[] = {1.0,
                          2.05319162663775882187e0, 1.67638483018380384940e0,
                          6.89767334985100004550e-1, 1.48103976427480074590e-1,
                          1.51986665636164571966e-2, 5.47593808499534494600e-4,
                          1.05075007164441684324e-9};
  constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                          1.78482653991729133580e0, 2.96560571828504891230e-1,
                          2.65321895265761230930e-2, 1.24266094738807843860e-3,
                          2.71155556874348757815e-5, 2.01033439929228813265e-7};
  constexpr double f[] = {1.0,
                          5.99832206555887937690e-1, 1.36929880922735805310e-1,
                          1.48753612908506148525e-2, 7.86869131145613259100e-4,
                          1.84631831751005468180e-5, 1.42151175831644588870e-7,
                          2.04426310338993978564e-15};
  auto poly = [](const double* coef, double x) {
    double acc = 0.0;
    for (int i = 7; i >= 0; --i) acc = acc * x + coef[i];
    return acc;
  };

  double q = alpha - 0.5;
  double z;
  if (std::abs(q) <= 0.425) {
    double r = 0.180625 - q * q;
    z = q * poly(a, r) / poly(b, r);
  } else {
    double r = q < 0 ? alpha : 1.0 - alpha;
    r = std::sqrt(-std::log(r));
    z = r <= 5.0 ? poly(c, r - 1.6) / poly(d, r - 1.6) : poly(e, r - 5.0) / poly(f, r - 5.0);
    if (q < 0) z = -z;
  }

  // Newton step on the tail that is represented accurately.
  double resid = z <= 0 ? std_normal_cdf(z) - alpha : (1.0 - alpha) - std_normal_cdf(-z);
  double dens = std_normal_pdf(z);
  if (dens > 0) z -= resid / dens;
  return z;
}

double bvn_cdf(double x, double y, Correlation rho) {
  if (std::isnan(x) || std::isnan(y)) throw DomainError("bvn_cdf: NaN argument");
  double r = rho.value();
  if (x == -INFINITY || y == -INFINITY) return 0.0;
  if (x == INFINITY) return cdf_saturating(y);
  if (y == INFINITY) return cdf_saturating(x);
  if (r >= 1.0 - 1e-12) return cdf_saturating(std::min(x, y));
  if (r <= -1.0 + 1e-12) return std::max(0.0, cdf_saturating(x) + cdf_saturating(y) - 1.0);
  if (r == 0.0) return cdf_saturating(x) * cdf_saturating(y);
  return std::clamp(bvn_upper(-x, -y, r), 0.0, 1.0);
}

double orthant_negative(Correlation rho) {
  return 0.25 + std::asin(rho.value()) / kTwoPi;
}

}  // namespace proclab::gauss

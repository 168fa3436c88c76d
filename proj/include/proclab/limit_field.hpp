#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "proclab/marginal_laws.hpp"
#include "proclab/rng.hpp"

// Finite-dimensional sampling of the Gaussian limit of the empirical process.
namespace proclab::field {

using fbm::HurstIndex;
using laws::SpaceTimePoint;

struct FieldSpec {
  HurstIndex hurst{0.5};
  std::vector<SpaceTimePoint> points;
  double kappa = 0;       // t^kappa weighting
  double nugget = 1e-10;  // starting diagonal inflation

  void validate() const;
};

// M[a][b] = s^kappa t^kappa E G(p_a) G(p_b). At most 4096 points.
Eigen::MatrixXd build_cov_matrix(const FieldSpec& spec);

struct FieldSample {
  std::vector<SpaceTimePoint> points;
  std::size_t n_samples = 0;
  std::vector<double> values;  // row-major, one row per sample
  double nugget_used = 0;

  double value(std::size_t sample, std::size_t point) const {
    return values[sample * points.size() + point];
  }
  // `sample,t@x,...` header, one row per sample.
  void write_csv(std::ostream& out) const;
};

// Cholesky with nugget escalation: start at spec.nugget, multiply by 10 up to
// 1e-6, then FactorizationError. Coordinates with zero variance (t = 0, or
// x = +-inf) are exact zeros and stay out of the factorization.
FieldSample sample_field(const FieldSpec& spec, std::size_t n_samples, std::uint64_t seed,
                         Parallelism par = {});

// Swanson's median limit X(t) = sqrt(2 pi t) G(t, 0) at H = 1/2; X(0) = 0.
FieldSample sample_swanson(const std::vector<double>& t_points, std::size_t n_samples,
                           std::uint64_t seed, Parallelism par = {});

}  // namespace proclab::field

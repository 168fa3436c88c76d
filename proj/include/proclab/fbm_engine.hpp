#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "proclab/rng.hpp"

namespace proclab::fbm {

class HurstIndex {
 public:
  explicit HurstIndex(double h);
  double value() const noexcept { return h_; }

 private:
  double h_;
};

// Strictly increasing, nonnegative sample times of a path.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> points);

  // `count` equispaced points from t_min to t_max inclusive.
  static TimeGrid uniform(double t_min, double t_max, std::size_t count);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const noexcept { return points_[i]; }
  double back() const noexcept { return points_.back(); }

  // Index of a grid point equal to t within 1e-12 relative slack.
  std::optional<std::size_t> index_of(double t) const;
  bool starts_at_zero() const noexcept { return points_.front() == 0.0; }
  // Step of a uniform grid starting at 0, or nullopt.
  std::optional<double> uniform_step() const;

 private:
  std::vector<double> points_;
};

enum class Method { cholesky, circulant };

// n paths sampled on a shared grid, stored row-major (one row per path).
class FbmEnsemble {
 public:
  FbmEnsemble(HurstIndex hurst, TimeGrid grid, std::size_t n_paths, std::vector<double> values,
              std::uint64_t master_seed, Method method);

  const HurstIndex& hurst() const noexcept { return hurst_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_paths() const noexcept { return n_; }
  std::uint64_t master_seed() const noexcept { return seed_; }
  Method method() const noexcept { return method_; }

  std::span<const double> path(std::size_t i) const {
    return {values_.data() + i * grid_.size(), grid_.size()};
  }
  double value(std::size_t path, std::size_t time_index) const {
    return values_[path * grid_.size() + time_index];
  }
  // Cross-section of all paths at grid index j.
  std::vector<double> values_at(std::size_t j) const;
  const std::vector<double>& raw() const noexcept { return values_; }

  // `t,path_0,...` header, one row per grid point, 17 significant digits.
  void write_csv(std::ostream& out) const;

 private:
  HurstIndex hurst_;
  TimeGrid grid_;
  std::size_t n_;
  std::vector<double> values_;
  std::uint64_t seed_;
  Method method_;
};

// fBM covariance 1/2 (s^{2H} + t^{2H} - |s-t|^{2H}).
double fbm_cov(HurstIndex h, double s, double t);

// Exact sampling by Cholesky factorization of the grid covariance
// (cubic cost; grids up to 2048 points).
FbmEnsemble sample_cholesky(HurstIndex h, const TimeGrid& grid, std::size_t n, std::uint64_t seed,
                            Parallelism par = {});

// Exact sampling on a uniform grid from 0 via circulant embedding of
// fractional Gaussian noise. Falls back to Cholesky when the embedding has
// an eigenvalue below -1e-9.
FbmEnsemble sample_circulant(HurstIndex h, const TimeGrid& grid, std::size_t n,
                             std::uint64_t seed, Parallelism par = {});

FbmEnsemble sample(Method method, HurstIndex h, const TimeGrid& grid, std::size_t n,
                   std::uint64_t seed, Parallelism par = {});

struct SelfSimilarityRow {
  double t = 0;
  double scaled_t = 0;
  double ks_statistic = 0;
  double p_value = 1;
};

struct SelfSimilarityReport {
  double scale = 1;
  std::vector<SelfSimilarityRow> rows;
  double max_statistic() const;
  double min_p_value() const;
};

// Two-sample KS comparison of B(a t) / a^H against B(t) for every grid time
// t > 0 with a t also on the grid. Requires n >= 100 paths.
SelfSimilarityReport self_similarity_check(const FbmEnsemble& ens, double a);

// Two-sample KS statistic sup |F_a - F_b| of two samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic p-value of a two-sample KS statistic (Kolmogorov distribution).
double ks_p_value(double statistic, std::size_t n_a, std::size_t n_b);

}  // namespace proclab::fbm

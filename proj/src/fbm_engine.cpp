#include "proclab/fbm_engine.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <string>

#include "proclab/errors.hpp"

namespace proclab::fbm {

HurstIndex::HurstIndex(double h) : h_(h) {
  if (!(h > 0.0 && h < 1.0)) throw DomainError("Hurst index outside (0, 1)");
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw PreconditionError("time grid needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]) || points_[i] < 0.0)
      throw PreconditionError("time grid points must be finite and nonnegative");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw PreconditionError("time grid must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double t_min, double t_max, std::size_t count) {
  if (count < 2) throw PreconditionError("uniform grid needs count >= 2");
  if (!(t_max > t_min)) throw PreconditionError("uniform grid needs t_max > t_min");
  std::vector<double> pts(count);
  double step = (t_max - t_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) pts[i] = t_min + step * static_cast<double>(i);
  pts.back() = t_max;
  return TimeGrid(std::move(pts));
}

std::optional<std::size_t> TimeGrid::index_of(double t) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), t - 1e-12 * std::max(1.0, std::abs(t)));
  if (it != points_.end() && std::abs(*it - t) <= 1e-12 * std::max(1.0, std::abs(t)))
    return static_cast<std::size_t>(it - points_.begin());
  return std::nullopt;
}

std::optional<double> TimeGrid::uniform_step() const {
  if (!starts_at_zero()) return std::nullopt;
  double step = points_[1];
  for (std::size_t i = 1; i < points_.size(); ++i) {
    double expect = step * static_cast<double>(i);
    if (std::abs(points_[i] - expect) > 1e-9 * std::max(1.0, expect)) return std::nullopt;
  }
  return step;
}

FbmEnsemble::FbmEnsemble(HurstIndex hurst, TimeGrid grid, std::size_t n_paths,
                         std::vector<double> values, std::uint64_t master_seed, Method method)
    : hurst_(hurst),
      grid_(std::move(grid)),
      n_(n_paths),
      values_(std::move(values)),
      seed_(master_seed),
      method_(method) {
  if (n_ == 0) throw PreconditionError("ensemble needs at least one path");
  if (values_.size() != n_ * grid_.size())
    throw PreconditionError("ensemble value matrix has wrong size");
}

std::vector<double> FbmEnsemble::values_at(std::size_t j) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = value(i, j);
  return out;
}

void FbmEnsemble::write_csv(std::ostream& out) const {
  out << 't';
  for (std::size_t i = 0; i < n_; ++i) out << ",path_" << i;
  out << '\n';
  char buf[40];
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", grid_[j]);
    out << buf;
    for (std::size_t i = 0; i < n_; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", value(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

double fbm_cov(HurstIndex h, double s, double t) {
  if (s < 0.0 || t < 0.0) throw DomainError("fbm_cov: negative time");
  double e = 2.0 * h.value();
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(s - t), e));
}

namespace {

// FFTW planning is not thread safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> standard_normals(std::uint64_t seed, std::size_t path, std::size_t count) {
  Engine eng = make_stream(seed, path);
  std::normal_distribution<double> normal;
  std::vector<double> z(count);
  for (auto& v : z) v = normal(eng);
  return z;
}

// Lower Cholesky factor of the covariance at the positive grid times.
Eigen::MatrixXd grid_cholesky(HurstIndex h, std::span<const double> times) {
  const auto m = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd cov(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) cov(a, b) = cov(b, a) = fbm_cov(h, times[a], times[b]);

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  double jitter = 1e-12 * cov.diagonal().maxCoeff();
  cov.diagonal().array() += jitter;
  llt.compute(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  throw FactorizationError("fBM grid covariance is not positive definite",
                           ldlt.vectorD().minCoeff());
}

}  // namespace

FbmEnsemble sample_cholesky(HurstIndex h, const TimeGrid& grid, std::size_t n, std::uint64_t seed,
                            Parallelism par) {
  if (grid.size() > 2048) throw PreconditionError("sample_cholesky: grid larger than 2048 points");
  if (n == 0) throw PreconditionError("sample_cholesky: n must be >= 1");
  const std::size_t offset = grid.starts_at_zero() ? 1 : 0;
  auto times = grid.points().subspan(offset);
  const Eigen::MatrixXd L = grid_cholesky(h, times);
  const auto m = static_cast<Eigen::Index>(times.size());
  const std::size_t width = grid.size();

  std::vector<double> values(n * width, 0.0);
#pragma omp parallel for schedule(static) num_threads(par.threads)
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> z = standard_normals(seed, i, times.size());
    Eigen::Map<const Eigen::VectorXd> zv(z.data(), m);
    Eigen::Map<Eigen::VectorXd> row(values.data() + i * width + offset, m);
    row.noalias() = L.triangularView<Eigen::Lower>() * zv;
  }
  return FbmEnsemble(h, grid, n, std::move(values), seed, Method::cholesky);
}

FbmEnsemble sample_circulant(HurstIndex h, const TimeGrid& grid, std::size_t n,
                             std::uint64_t seed, Parallelism par) {
  auto step = grid.uniform_step();
  if (!step) throw PreconditionError("sample_circulant: grid must be uniform and start at 0");
  if (n == 0) throw PreconditionError("sample_circulant: n must be >= 1");

  const std::size_t steps = grid.size() - 1;
  const std::size_t embed = 2 * steps;
  const double e = 2.0 * h.value();
  const double scale = std::pow(*step, e);
  auto fgn_acov = [&](double k) {
    return 0.5 * scale * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
  };

  // Eigenvalues of the circulant whose first row embeds the fGn autocovariance.
  std::vector<double> eig(embed);
  {
    std::vector<std::complex<double>> row(embed), spec(embed);
    for (std::size_t k = 0; k < embed; ++k) {
      std::size_t lag = k <= steps ? k : embed - k;
      row[k] = fgn_acov(static_cast<double>(lag));
    }
    std::lock_guard lock(fftw_planner_mutex());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(embed),
                                      reinterpret_cast<fftw_complex*>(row.data()),
                                      reinterpret_cast<fftw_complex*>(spec.data()), FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    for (std::size_t k = 0; k < embed; ++k) eig[k] = spec[k].real();
  }
  double min_eig = *std::min_element(eig.begin(), eig.end());
  if (min_eig < -1e-9) return sample_cholesky(h, grid, n, seed, par);
  for (auto& v : eig) v = std::sqrt(std::max(v, 0.0) / static_cast<double>(embed));

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    std::vector<std::complex<double>> probe_in(embed), probe_out(embed);
    plan = fftw_plan_dft_1d(static_cast<int>(embed), reinterpret_cast<fftw_complex*>(probe_in.data()),
                            reinterpret_cast<fftw_complex*>(probe_out.data()), FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  const std::size_t width = grid.size();
  std::vector<double> values(n * width, 0.0);
#pragma omp parallel for schedule(static) num_threads(par.threads)
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> z = standard_normals(seed, i, 2 * embed);
    std::vector<std::complex<double>> in(embed), out(embed);
    for (std::size_t k = 0; k < embed; ++k) in[k] = eig[k] * std::complex<double>(z[2 * k], z[2 * k + 1]);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    double acc = 0.0;
    double* row = values.data() + i * width;
    for (std::size_t k = 0; k < steps; ++k) {
      acc += out[k].real();
      row[k + 1] = acc;
    }
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return FbmEnsemble(h, grid, n, std::move(values), seed, Method::circulant);
}

FbmEnsemble sample(Method method, HurstIndex h, const TimeGrid& grid, std::size_t n,
                   std::uint64_t seed, Parallelism par) {
  return method == Method::circulant ? sample_circulant(h, grid, n, seed, par)
                                     : sample_cholesky(h, grid, n, seed, par);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_p_value(double statistic, std::size_t n_a, std::size_t n_b) {
  const double ne = static_cast<double>(n_a) * static_cast<double>(n_b) /
                    static_cast<double>(n_a + n_b);
  const double root = std::sqrt(ne);
  const double lambda = (root + 0.12 + 0.11 / root) * statistic;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

SelfSimilarityReport self_similarity_check(const FbmEnsemble& ens, double a) {
  if (!(a > 0.0)) throw PreconditionError("self_similarity_check: scale must be positive");
  if (ens.n_paths() < 100) throw PreconditionError("self_similarity_check: needs n >= 100 paths");
  SelfSimilarityReport report;
  report.scale = a;
  const double shrink = std::pow(a, -ens.hurst().value());
  const auto& grid = ens.grid();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid[j] <= 0.0) continue;
    auto idx = grid.index_of(a * grid[j]);
    if (!idx) continue;
    std::vector<double> base = ens.values_at(j);
    std::vector<double> scaled = ens.values_at(*idx);
    for (auto& v : scaled) v *= shrink;
    SelfSimilarityRow row;
    row.t = grid[j];
    row.scaled_t = grid[*idx];
    row.ks_statistic = ks_two_sample(std::move(base), std::move(scaled));
    row.p_value = ks_p_value(row.ks_statistic, ens.n_paths(), ens.n_paths());
    report.rows.push_back(row);
  }
  if (report.rows.empty())
    throw PreconditionError("self_similarity_check: no grid time t with a*t on the grid");
  return report;
}

double SelfSimilarityReport::max_statistic() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.ks_statistic);
  return m;
}

double SelfSimilarityReport::min_p_value() const {
  double m = 1.0;
  for (const auto& r : rows) m = std::min(m, r.p_value);
  return m;
}

}  // namespace proclab::fbm

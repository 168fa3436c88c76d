#include "proclab/empirical_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "proclab/errors.hpp"
#include "proclab/gauss_num.hpp"
#include "proclab/modulus.hpp"

namespace proclab::empirical {

namespace {

std::size_t require_grid_index(const FbmEnsemble& ens, double t) {
  auto idx = ens.grid().index_of(t);
  if (!idx) throw PreconditionError("time " + std::to_string(t) + " is not on the ensemble grid");
  return *idx;
}

std::vector<double> sorted_section(const FbmEnsemble& ens, std::size_t j) {
  std::vector<double> v = ens.values_at(j);
  std::sort(v.begin(), v.end());
  return v;
}

std::size_t count_at_most(const std::vector<double>& sorted, double x) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

bool has_ties(const std::vector<double>& sorted) {
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

std::vector<std::size_t> window_indices(const FbmEnsemble& ens, const EvalWindow& w) {
  w.validate();
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < ens.grid().size(); ++j)
    if (w.contains(ens.grid()[j])) out.push_back(j);
  if (out.empty()) throw PreconditionError("evaluation window contains no grid time");
  return out;
}

}  // namespace

void EvalWindow::validate() const {
  if (!(gamma >= 0.0)) throw PreconditionError("window gamma must be >= 0");
  if (!(gamma < t_max)) throw PreconditionError("window needs gamma < t_max");
  if (!(rho > 0.0 && rho < 0.5)) throw PreconditionError("window rho must lie in (0, 1/2)");
  if (!(kappa >= 0.0)) throw PreconditionError("window kappa must be >= 0");
}

bool EvalWindow::contains(double t) const {
  const double slack = 1e-12 * std::max(1.0, t_max);
  return t >= gamma - slack && t <= t_max + slack;
}

double empirical_cdf(const FbmEnsemble& ens, double t, double x) {
  const std::size_t j = require_grid_index(ens, t);
  std::size_t below = 0;
  for (std::size_t i = 0; i < ens.n_paths(); ++i) below += ens.value(i, j) <= x ? 1 : 0;
  return static_cast<double>(below) / static_cast<double>(ens.n_paths());
}

double empirical_process(const FbmEnsemble& ens, double t, double x) {
  if (!(t > 0.0)) throw PreconditionError("empirical_process: t must be positive");
  const double fn = empirical_cdf(ens, t, x);
  const double n = static_cast<double>(ens.n_paths());
  return std::sqrt(n) * (fn - laws::marginal_cdf(ens.hurst(), {t, x}));
}

SupStatistic sup_vn(const FbmEnsemble& ens, const EvalWindow& w) {
  const auto indices = window_indices(ens, w);
  const double n = static_cast<double>(ens.n_paths());
  SupStatistic best;
  for (std::size_t j : indices) {
    const double t = ens.grid()[j];
    if (t == 0.0) continue;  // F_n = F exactly for the point mass at 0
    const double weight = w.kappa > 0.0 ? std::pow(t, w.kappa) : 1.0;
    const auto sorted = sorted_section(ens, j);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double f = laws::marginal_cdf(ens.hurst(), {t, sorted[i]});
      const double d = std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n);
      const double val = weight * d;
      if (val > best.value) best = {val, t, sorted[i]};
    }
  }
  best.value *= std::sqrt(n);
  return best;
}

std::size_t quantile_rank(double alpha, std::size_t n) {
  const double r = std::ceil(alpha * static_cast<double>(n));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(r, 1.0)), 1, n);
}

double empirical_quantile(const FbmEnsemble& ens, double t, QuantileLevel a) {
  const std::size_t j = require_grid_index(ens, t);
  std::vector<double> v = ens.values_at(j);
  const std::size_t r = quantile_rank(a.value(), v.size());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r - 1), v.end());
  return v[r - 1];
}

double quantile_process(const FbmEnsemble& ens, double t, QuantileLevel a) {
  if (!(t > 0.0)) throw PreconditionError("quantile_process: t must be positive");
  const double n = static_cast<double>(ens.n_paths());
  return std::sqrt(n) * (empirical_quantile(ens, t, a) - laws::true_quantile(ens.hurst(), t, a));
}

double median_process(const FbmEnsemble& ens, double t) {
  if (ens.n_paths() % 2 == 0) throw PreconditionError("median_process: n must be odd");
  return empirical_quantile(ens, t, QuantileLevel(0.5));
}

std::vector<double> alpha_grid(double rho, std::size_t count) {
  if (!(rho > 0.0 && rho < 0.5)) throw PreconditionError("alpha_grid: rho must lie in (0, 1/2)");
  if (count == 0) throw PreconditionError("alpha_grid: count must be >= 1");
  if (count == 1) return {0.5};
  std::vector<double> out(count);
  const double step = (1.0 - 2.0 * rho) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = rho + step * static_cast<double>(i);
  out.back() = 1.0 - rho;
  return out;
}

SupStatistic bk_remainder(const FbmEnsemble& ens, const EvalWindow& w, std::size_t alpha_count) {
  const auto indices = window_indices(ens, w);
  const double h = ens.hurst().value();
  const bool weighted = w.kappa > 0.0;
  if (weighted && std::abs(w.kappa - h) > 1e-12)
    throw PreconditionError("bk_remainder: weighted form requires kappa == H");

  const auto alphas = alpha_grid(w.rho, alpha_count);
  std::vector<double> z(alphas.size()), phi(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    z[a] = alphas[a] == 0.5 ? 0.0 : gauss::std_normal_quantile(alphas[a]);
    phi[a] = gauss::std_normal_pdf(z[a]);
  }

  const std::size_t n = ens.n_paths();
  const double root_n = std::sqrt(static_cast<double>(n));
  SupStatistic best;
  for (std::size_t j : indices) {
    const double t = ens.grid()[j];
    if (t == 0.0) continue;  // both terms vanish at the degenerate time
    const double scale = std::pow(t, h);
    const auto sorted = sorted_section(ens, j);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const double tau = scale * z[a];
      const double tau_n = sorted[quantile_rank(alphas[a], n) - 1];
      const double vn = root_n * (static_cast<double>(count_at_most(sorted, tau)) / static_cast<double>(n) - alphas[a]);
      const double un = root_n * (tau_n - tau);
      const double rem = weighted ? std::abs(scale * vn + phi[a] * un)
                                  : std::abs(vn + (phi[a] / scale) * un);
      if (rem > best.value) best = {rem, t, alphas[a]};
    }
  }
  return best;
}

Prop3Report prop3_check(const FbmEnsemble& ens, const EvalWindow& w, std::size_t alpha_count) {
  const auto indices = window_indices(ens, w);
  const auto alphas = alpha_grid(w.rho, alpha_count);
  const std::size_t n = ens.n_paths();
  Prop3Report report;
  report.m = 2 * (static_cast<int>(std::ceil(2.0 / ens.hurst().value() - 1e-12)) + 1);

  for (std::size_t j : indices) {
    const double t = ens.grid()[j];
    if (t == 0.0) continue;
    const auto sorted = sorted_section(ens, j);
    if (has_ties(sorted)) ++report.ties;
    for (double alpha : alphas) {
      ++report.checks;
      const std::size_t rank = quantile_rank(alpha, n);
      const std::size_t count = count_at_most(sorted, sorted[rank - 1]);
      const double excess = static_cast<double>(count) - alpha * static_cast<double>(n);
      const bool identity = count == rank;
      const bool bound = excess >= 0.0 && excess <= static_cast<double>(report.m);
      if (!identity) ++report.identity_violations;
      if (!bound) ++report.bound_violations;
      if ((!identity || !bound) && report.examples.size() < 16)
        report.examples.push_back({t, alpha, count, rank});
    }
  }
  return report;
}

bool holder_membership(std::span<const double> path, const fbm::TimeGrid& grid, double k_const,
                       HurstIndex h) {
  if (!(k_const > 0.0)) throw PreconditionError("holder_membership: K must be positive");
  if (path.size() != grid.size()) throw PreconditionError("holder_membership: path/grid size mismatch");
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      const double bound = k_const * brackets::f_h(h, grid[b] - grid[a]);
      if (std::abs(path[b] - path[a]) > bound) return false;
    }
  }
  return true;
}

}  // namespace proclab::empirical

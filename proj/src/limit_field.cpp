#include "proclab/limit_field.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "proclab/errors.hpp"

namespace proclab::field {

void FieldSpec::validate() const {
  if (points.empty()) throw PreconditionError("field spec has no points");
  if (points.size() > 4096) throw ResourceError("field spec exceeds 4096 points");
  if (!(kappa >= 0.0)) throw DomainError("field kappa must be >= 0");
  if (!(nugget >= 0.0)) throw DomainError("field nugget must be >= 0");
  for (std::size_t a = 0; a < points.size(); ++a) {
    const auto& p = points[a];
    if (std::isnan(p.x) || !std::isfinite(p.t)) throw DomainError("field point is not a number");
    if (p.t < 0.0 || (p.t == 0.0 && kappa == 0.0))
      throw DomainError("field point times must be positive unless kappa > 0");
    for (std::size_t b = 0; b < a; ++b)
      if (points[b].t == p.t && points[b].x == p.x) throw PreconditionError("field points must be distinct");
  }
}

Eigen::MatrixXd build_cov_matrix(const FieldSpec& spec) {
  spec.validate();
  const auto d = static_cast<Eigen::Index>(spec.points.size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const auto& p = spec.points[static_cast<std::size_t>(a)];
      const auto& q = spec.points[static_cast<std::size_t>(b)];
      const double v = spec.kappa > 0.0 ? laws::weighted_cov_kernel(spec.hurst, spec.kappa, p, q)
                                        : laws::limit_cov_kernel(spec.hurst, p, q);
      m(a, b) = v;
      m(b, a) = v;
    }
  }
  return m;
}

FieldSample sample_field(const FieldSpec& spec, std::size_t n_samples, std::uint64_t seed,
                         Parallelism par) {
  if (n_samples == 0) throw PreconditionError("sample_field: n_samples must be >= 1");
  const Eigen::MatrixXd cov = build_cov_matrix(spec);
  std::vector<Eigen::Index> live;
  for (Eigen::Index a = 0; a < cov.rows(); ++a)
    if (cov(a, a) > 0.0) live.push_back(a);

  const auto dl = static_cast<Eigen::Index>(live.size());
  Eigen::MatrixXd sub(dl, dl);
  for (Eigen::Index a = 0; a < dl; ++a)
    for (Eigen::Index b = 0; b < dl; ++b) sub(a, b) = cov(live[a], live[b]);

  Eigen::MatrixXd chol;
  double nugget = spec.nugget > 0.0 ? spec.nugget : 1e-10;
  bool factored = dl == 0;
  while (!factored) {
    Eigen::MatrixXd trial = sub;
    trial.diagonal().array() += nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      chol = llt.matrixL();
      factored = true;
      break;
    }
    if (nugget * 10.0 > 1e-6 * (1.0 + 1e-9)) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(trial);
      throw FactorizationError("limit field covariance is not positive definite after nugget 1e-6",
                               ldlt.vectorD().minCoeff());
    }
    nugget *= 10.0;
  }

  FieldSample out;
  out.points = spec.points;
  out.n_samples = n_samples;
  out.nugget_used = dl == 0 ? 0.0 : nugget;
  out.values.assign(n_samples * spec.points.size(), 0.0);
  const std::size_t width = spec.points.size();
#pragma omp parallel for schedule(static) num_threads(par.threads)
  for (std::size_t i = 0; i < n_samples; ++i) {
    Engine rng = make_stream(seed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(dl);
    for (Eigen::Index k = 0; k < dl; ++k) z(k) = normal(rng);
    const Eigen::VectorXd y = chol.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index k = 0; k < dl; ++k) out.values[i * width + static_cast<std::size_t>(live[k])] = y(k);
  }
  return out;
}

FieldSample sample_swanson(const std::vector<double>& t_points, std::size_t n_samples, std::uint64_t seed,
                           Parallelism par) {
  FieldSpec spec;
  spec.hurst = HurstIndex(0.5);
  std::vector<std::size_t> positive;
  for (std::size_t a = 0; a < t_points.size(); ++a) {
    if (!(t_points[a] >= 0.0)) throw DomainError("sample_swanson: times must be >= 0");
    if (t_points[a] > 0.0) {
      spec.points.push_back({t_points[a], 0.0});
      positive.push_back(a);
    }
  }

  FieldSample out;
  out.n_samples = n_samples;
  for (double t : t_points) out.points.push_back({t, 0.0});
  out.values.assign(n_samples * t_points.size(), 0.0);
  if (spec.points.empty()) return out;

  const FieldSample g = sample_field(spec, n_samples, seed, par);
  out.nugget_used = g.nugget_used;
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (std::size_t k = 0; k < positive.size(); ++k) {
      const double t = t_points[positive[k]];
      out.values[i * t_points.size() + positive[k]] = std::sqrt(2.0 * std::numbers::pi * t) * g.value(i, k);
    }
  }
  return out;
}

void FieldSample::write_csv(std::ostream& out) const {
  char buf[64];
  out << "sample";
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, ",%.17g@%.17g", p.t, p.x);
    out << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < n_samples; ++i) {
    out << i;
    for (std::size_t k = 0; k < points.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", value(i, k));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace proclab::field

#include "proclab/bracket_lab.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "proclab/empirical_lab.hpp"
#include "proclab/errors.hpp"
#include "proclab/gauss_num.hpp"
#include "proclab/rng.hpp"

namespace proclab::brackets {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;
constexpr double kWidthSlack = 1e-12;

double phi_cdf(double z) { return gauss::cdf_saturating(z); }

// |q + d|^{2H} - |q|^{2H} for d > 0 without cancellation when d << |q|.
double pow_increment(double q, double d, double two_h) {
  if (q == 0.0) return std::pow(d, two_h);
  if (q > 0.0) return std::pow(q, two_h) * std::expm1(two_h * std::log1p(d / q));
  const double aq = -q;
  if (d <= aq) return std::pow(aq, two_h) * std::expm1(two_h * std::log1p(-d / aq));
  return std::pow(d - aq, two_h) - std::pow(aq, two_h);
}

// Largest inner width of time cell with base sigma and shift, over j in {0, 1}.
double inner_width(const BracketFamily& fam, double sigma, double shift, long long j) {
  return phi_cdf((fam.level(j) + shift) / sigma) - phi_cdf((fam.level(j - 1) - shift) / sigma);
}

double tail_width(const BracketFamily& fam, double sigma, double shift) {
  return phi_cdf(-(fam.x_m() - shift) / sigma);
}

}  // namespace

void ModulusParams::validate() const {
  if (!(k_const >= kE)) throw DomainError("modulus constant K must be >= e");
  if (!(gamma > 0.0 && gamma < 1.0 / kE)) throw DomainError("gamma must lie in (0, 1/e)");
  if (!(u > 0.0 && u < 1.0 / kE)) throw DomainError("u must lie in (0, 1/e)");
  if (!(t_max >= 1.0) || !std::isfinite(t_max)) throw DomainError("T must be finite and >= 1");
}

GridSteps grid_steps(const ModulusParams& p) {
  p.validate();
  const double h = p.h.value();
  GridSteps s;
  s.delta = std::sqrt(kPi / 2.0) * std::pow(p.gamma, h) * p.u * p.u;
  const double inner = std::pow(p.k_const, 1.0 / h) / p.gamma * std::pow(p.u, -2.0 / h);
  s.gamma_step = std::pow(std::sqrt(kPi / 8.0), 1.0 / h) * std::pow(p.k_const, -1.0 / h) * p.gamma *
                 std::pow(p.u, 2.0 / h) / std::pow(std::log(inner), 1.0 / h);
  return s;
}

double BracketFamily::level(long long j) const {
  if (j > m) return std::numeric_limits<double>::infinity();
  if (j < -m) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(j) * delta;
}

double BracketFamily::cell_start(long double i) const {
  return static_cast<double>(static_cast<long double>(gamma) +
                             (i - 1.0L) * static_cast<long double>(gamma_step));
}

double BracketFamily::cell_gap(long double i) const {
  return i >= static_cast<long double>(k) ? final_gap : gamma_step;
}

double BracketFamily::cell_shift(long double i) const {
  return shift_scale * (i >= static_cast<long double>(k) ? shift_final : shift_uniform);
}

long double BracketFamily::bracket_count() const {
  return (static_cast<long double>(k) + 1.0L) * (2.0L * static_cast<long double>(m) + 2.0L);
}

long long BracketFamily::level_cell(double x) const {
  if (x > x_m()) return m + 1;
  if (x <= -x_m()) return -m;
  auto j = static_cast<long long>(std::ceil(x / delta));
  while (level(j - 1) >= x) --j;
  while (level(j) < x) ++j;
  return std::clamp(j, -m + 1, m);
}

BracketFamily build_brackets(const ModulusParams& p) {
  const GridSteps steps = grid_steps(p);
  const double h = p.h.value();
  BracketFamily fam;
  fam.gamma = p.gamma;
  fam.t_max = p.t_max;
  fam.gamma_step = steps.gamma_step;
  fam.delta = steps.delta;

  const double span = p.t_max - p.gamma;
  const double rem = std::fmod(span, steps.gamma_step);
  const double whole = std::round((span - rem) / steps.gamma_step);
  fam.k = rem > 0.0 ? whole + 1.0 : whole;
  fam.final_gap = rem > 0.0 ? rem : steps.gamma_step;
  if (!std::isfinite(fam.k) || fam.k < 1.0) throw ResourceError("time cell count is not representable");

  const double reach = 4.0 * std::pow(p.t_max, h) * std::sqrt(std::log(1.0 / p.u));
  const double m = std::ceil(reach / steps.delta);
  if (!(m < 1e15)) throw ResourceError("level count is not representable");
  fam.m = static_cast<long long>(m);

  fam.shift_uniform = p.k_const * f_h(p.h, fam.gamma_step);
  fam.shift_final = p.k_const * f_h(p.h, fam.final_gap);

  // Structural conditions of the construction.
  if (!(fam.x_m() >= 2.0 * std::pow(p.t_max, h))) throw DomainError("x_m < 2 T^H");
  const double cap = std::pow(p.gamma, h) * p.u * p.u;
  if (!(fam.shift_uniform <= cap && fam.shift_final <= cap && cap <= 1.0))
    throw DomainError("K f_H(t_i - t_{i-1}) exceeds gamma^H u^2");
  return fam;
}

WidthReport verify_widths(const BracketFamily& fam, const ModulusParams& p, double exhaustive_limit) {
  p.validate();
  const double h = p.h.value();
  const double bound = p.u * p.u + kWidthSlack;
  WidthReport r;
  auto note = [&](double inner, double tail) {
    if (!std::isnan(inner)) {
      r.max_inner_width = std::max(r.max_inner_width, inner);
      if (!(inner <= bound)) ++r.violations;
    }
    if (!std::isnan(tail)) {
      r.max_tail_width = std::max(r.max_tail_width, tail);
      if (!(tail <= bound)) ++r.violations;
    }
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const long double cells = fam.bracket_count() - (2.0L * fam.m + 2.0L);  // k (2m + 2)
  if (cells <= static_cast<long double>(exhaustive_limit)) {
    r.exhaustive = true;
    const auto k = static_cast<long long>(fam.k);
    for (long long i = 1; i <= k; ++i) {
      const double sigma = std::pow(fam.cell_start(static_cast<long double>(i)), h);
      const double s = fam.cell_shift(static_cast<long double>(i));
      // j = -m and j = m + 1 share the tail value by symmetry
      const double left_tail = phi_cdf((fam.level(-fam.m) + s) / sigma);
      note(nan, left_tail);
      note(nan, tail_width(fam, sigma, s));
      for (long long j = -fam.m + 1; j <= fam.m; ++j) note(inner_width(fam, sigma, s, j), nan);
    }
    r.cells_checked = static_cast<double>(cells);
    return r;
  }

  // Inner widths: the interval length is fixed per time cell, so the mass is
  // largest for the cells straddling 0 and at the smallest base time.
  const auto last = static_cast<long double>(fam.k);
  std::vector<long double> cells_to_check = {1.0L, last};
  if (fam.k >= 2.0) cells_to_check.push_back(last - 1.0L);
  for (long double i : cells_to_check) {
    const double sigma = std::pow(fam.cell_start(i), h);
    const double s = fam.cell_shift(i);
    for (long long j : {0LL, 1LL}) note(inner_width(fam, sigma, s, j), nan);
    note(nan, tail_width(fam, sigma, s));
    r.cells_checked += 3;
  }
  return r;
}

CoveringReport verify_covering(const BracketFamily& fam, const ModulusParams& p,
                               const fbm::FbmEnsemble& ens, std::size_t probes, std::uint64_t seed) {
  p.validate();
  if (probes == 0) throw PreconditionError("verify_covering: probes must be >= 1");
  const double h = p.h.value();
  const double two_h = 2.0 * h;
  const double big_k = p.k_const;
  const auto& grid = ens.grid();
  if (std::abs(ens.hurst().value() - h) > 1e-15)
    throw PreconditionError("verify_covering: ensemble Hurst index differs from the family's");

  std::vector<std::size_t> base_members;
  for (std::size_t i = 0; i < ens.n_paths(); ++i)
    if (empirical::holder_membership(ens.path(i), grid, big_k, p.h)) base_members.push_back(i);
  if (base_members.empty()) throw PreconditionError("verify_covering: no ensemble path lies in C(K)");

  // Conditioning set: grid times > 0 (B(0) = 0 carries no information).
  std::vector<std::size_t> cond_idx;
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (grid[j] > 0.0) cond_idx.push_back(j);
  const auto nc = static_cast<Eigen::Index>(cond_idx.size());
  Eigen::MatrixXd sigma(nc, nc);
  for (Eigen::Index a = 0; a < nc; ++a)
    for (Eigen::Index b = 0; b < nc; ++b) sigma(a, b) = fbm::fbm_cov(p.h, grid[cond_idx[a]], grid[cond_idx[b]]);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw FactorizationError("verify_covering: grid covariance", 0.0);

  // Member path values on the conditioning set, one column per member.
  Eigen::MatrixXd g(nc, static_cast<Eigen::Index>(base_members.size()));
  for (std::size_t c = 0; c < base_members.size(); ++c)
    for (Eigen::Index a = 0; a < nc; ++a) g(a, static_cast<Eigen::Index>(c)) = ens.value(base_members[c], cond_idx[a]);

  CoveringReport rep;
  rep.probes = probes;
  rep.base_members = base_members.size();
  rep.min_members = base_members.size();
  double member_total = 0.0;

  const double scale_t = std::pow(p.t_max, h);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> mod_a(grid.size()), mod_t(grid.size());
  Eigen::MatrixXd c(nc, 2);

  for (std::size_t probe = 0; probe < probes; ++probe) {
    Engine rng = make_stream(seed, probe);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    // Cell i: 1% first, 1% last, the rest uniform over all k cells.
    const double pick = unif(rng);
    long double i;
    if (pick < 0.01) {
      i = 1.0L;
    } else if (pick < 0.02) {
      i = static_cast<long double>(fam.k);
    } else {
      i = std::floor(static_cast<long double>(unif(rng)) * static_cast<long double>(fam.k)) + 1.0L;
      i = std::min(i, static_cast<long double>(fam.k));
    }
    const double a = fam.cell_start(i);
    const double gap = fam.cell_gap(i);
    const double delta_t = (1.0 - unif(rng)) * gap;  // t = a + delta_t in (t_{i-1}, t_i]
    const double true_shift = fam.cell_shift(i) / fam.shift_scale;

    const double xpick = unif(rng);
    double x;
    if (xpick < 0.8) {
      x = scale_t * normal(rng);
    } else if (xpick < 0.9) {
      const auto span = static_cast<double>(2 * fam.m);
      const long long j = -fam.m + 1 + std::min(static_cast<long long>(unif(rng) * span), 2 * fam.m - 1);
      const double off = (1.0 - unif(rng)) * 0.25 * true_shift;
      x = unif(rng) < 0.5 ? fam.level(j) - off : fam.level(j - 1) + off;
    } else {
      x = (unif(rng) < 0.5 ? -1.0 : 1.0) * (fam.x_m() + 1.0);
    }
    const long long j = fam.level_cell(x);
    const double shift = fam.cell_shift(i);
    auto upper = [&](double anchor) { return j == fam.m + 1 || anchor <= fam.level(j) + shift; };
    auto lower = [&](double anchor) { return j != -fam.m && anchor <= fam.level(j - 1) - shift; };

    // Extremal ramps of C(K): constant up to t_{i-1}, then anchor +- K f_H(s - t_{i-1}).
    const double ramp = big_k * f_h(p.h, delta_t);
    {
      const double anchor_v = x + (1.0 - 1e-3) * ramp;  // ends at x - 1e-3 ramp <= x
      const double anchor_l = x - (1.0 - 1e-3) * ramp;  // ends above x
      rep.witness_checks += 2;
      if (!upper(anchor_v)) ++rep.witness_violations;
      if (lower(anchor_l)) ++rep.witness_violations;
    }

    // Conditional law of (B(a), B(a + d) - B(a)) given the grid values.
    const double a2h = std::pow(a, two_h);
    const double rise = pow_increment(a, delta_t, two_h);  // (a + d)^{2H} - a^{2H}
    const double var_a = a2h;
    const double var_d = std::pow(delta_t, two_h);
    const double cov_ad = 0.5 * (rise - var_d);
    for (Eigen::Index r = 0; r < nc; ++r) {
      const double s = grid[cond_idx[r]];
      c(r, 0) = fbm::fbm_cov(p.h, a, s);
      c(r, 1) = 0.5 * (rise - pow_increment(a - s, delta_t, two_h));
    }
    const Eigen::MatrixXd w = llt.solve(c);
    const Eigen::Matrix2d cc = c.transpose() * w;
    const double ca = std::max(var_a - cc(0, 0), 0.0);
    const double cad = cov_ad - cc(0, 1);
    const double cd = std::max(var_d - cc(1, 1), 0.0);
    const double l11 = std::sqrt(ca);
    const double l21 = l11 > 0.0 ? cad / l11 : 0.0;
    const double l22 = std::sqrt(std::max(cd - l21 * l21, 0.0));

    for (std::size_t r = 0; r < grid.size(); ++r) {
      const double da = std::abs(a - grid[r]);
      const double dt = std::abs((a - grid[r]) + delta_t);
      // a probe time that rounds onto a grid time carries the grid value
      mod_a[r] = da > 0.0 ? big_k * f_h(p.h, da) : inf;
      mod_t[r] = dt > 0.0 ? big_k * f_h(p.h, dt) : inf;
    }

    std::size_t members = 0;
    const Eigen::VectorXd mean_a = w.col(0).transpose() * g;
    const Eigen::VectorXd mean_d = w.col(1).transpose() * g;
    for (std::size_t col = 0; col < base_members.size(); ++col) {
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      const double va = mean_a(static_cast<Eigen::Index>(col)) + l11 * z1;
      const double vd = mean_d(static_cast<Eigen::Index>(col)) + l21 * z1 + l22 * z2;
      const double vt = va + vd;
      if (std::abs(vd) > ramp) continue;
      const auto path = ens.path(base_members[col]);
      bool in_class = true;
      for (std::size_t r = 0; r < grid.size() && in_class; ++r) {
        in_class = std::abs(va - path[r]) <= mod_a[r] && std::abs(vt - path[r]) <= mod_t[r];
      }
      if (!in_class) continue;
      ++members;
      const bool below = vt <= x;
      if (lower(va) && !below) ++rep.path_violations;
      if (below && !upper(va)) ++rep.path_violations;
    }
    rep.member_checks += members;
    rep.min_members = std::min(rep.min_members, members);
    member_total += static_cast<double>(members);
  }
  rep.mean_members = member_total / static_cast<double>(probes);
  return rep;
}

double entropy_bound_1(const ModulusParams& p) {
  p.validate();
  const double h = p.h.value();
  // Constant obtained by bounding (k + 1)(2m + 2) term by term from the grid
  // steps, with a cushion for the ceilings.
  const double c_t = 8.0 * std::sqrt(2.0 / kPi) * std::pow(8.0 / kPi, 1.0 / (2.0 * h)) *
                     std::pow(2.0 / h, 1.0 / h) * std::pow(p.t_max, 1.0 + h) * 1.736 * 1.1;
  return c_t * std::pow(p.k_const, 1.0 / h) * std::pow(p.u, -2.0 * (1.0 + 1.0 / h)) *
         std::sqrt(std::log(1.0 / p.u)) * std::pow(p.gamma, -(1.0 + h)) *
         std::pow(std::log(p.k_const / (p.u * p.gamma)), 1.0 / h);
}

double entropy_bound_2(const ModulusParams& p) {
  if (!(p.k_const >= kE)) throw DomainError("modulus constant K must be >= e");
  if (!(p.u > 0.0 && p.u <= 1.0)) throw DomainError("u must lie in (0, 1]");
  if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  if (!(p.t_max >= 1.0)) throw DomainError("T must be >= 1");
  const double h = p.h.value();
  const double c_t = 8.0 * std::sqrt(2.0 / kPi) * std::pow(8.0 / kPi, 1.0 / (2.0 * h)) *
                     std::pow(2.0 / h, 1.0 / h) * std::pow(p.t_max, 1.0 + h) * 1.736 * 1.1;
  const double c_prime = c_t * std::exp(-1.0 / h - 0.5);
  return c_prime * std::pow(p.k_const, 2.0 / h) * std::pow(p.u, -3.0 * (1.0 + 1.0 / h)) *
         std::pow(p.gamma, -(1.0 + 2.0 / h));
}

double pair_entropy_bound(const ModulusParams& p) {
  ModulusParams half = p;
  half.u = p.u / 2.0;
  const double single = entropy_bound_1(half);
  return single * single;
}

void write_family_csv(const BracketFamily& fam, const ModulusParams& p, std::ostream& out) {
  if (fam.bracket_count() > 1e8L) throw ResourceError("bracket family too large to dump (> 1e8 cells)");
  const double h = p.h.value();
  out << "kind,i,j,t_lo,t_hi,x_lo,x_hi,shift,width_sq\n";
  char line[512];
  const auto k = static_cast<long long>(fam.k);
  for (long long i = 1; i <= k; ++i) {
    const auto li = static_cast<long double>(i);
    const double t_lo = fam.cell_start(li);
    const double t_hi = i == k ? fam.t_max : t_lo + fam.gamma_step;
    const double s = fam.cell_shift(li);
    const double sigma = std::pow(t_lo, h);
    for (long long j = -fam.m; j <= fam.m + 1; ++j) {
      const bool tail = j == -fam.m || j == fam.m + 1;
      const double width = tail ? tail_width(fam, sigma, s) : inner_width(fam, sigma, s, j);
      std::snprintf(line, sizeof line, "%s,%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    tail ? "tail" : "inner", i, j, t_lo, t_hi, fam.level(j - 1), fam.level(j), s, width);
      out << line;
    }
  }
}

}  // namespace proclab::brackets

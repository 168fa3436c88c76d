#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "proclab/fbm_engine.hpp"
#include "proclab/modulus.hpp"

namespace proclab::brackets {

using fbm::HurstIndex;

struct ModulusParams {
  double k_const = 2.718281828459045;  // K >= e
  double gamma = 0.05;                 // (0, 1/e)
  double u = 0.05;                     // (0, 1/e)
  double t_max = 2.0;                  // T >= 1
  HurstIndex h{0.5};

  void validate() const;
};

struct GridSteps {
  double delta = 0;       // level spacing
  double gamma_step = 0;  // time spacing
};

GridSteps grid_steps(const ModulusParams& p);

// The bracket family is arithmetic: t_i = gamma + i * gamma_step for i < k,
// t_k = T, x_j = j * delta for |j| <= m, x_{+-(m+1)} = +-inf. Realistic
// parameters give far too many cells to store (k reaches 1e20), so cells are
// generated on demand.
struct BracketFamily {
  double gamma = 0;
  double t_max = 0;
  double gamma_step = 0;
  double delta = 0;
  double k = 0;            // number of time cells; may exceed 2^53
  long long m = 0;         // level count on each side of 0
  double final_gap = 0;    // t_k - t_{k-1}, in (0, gamma_step]
  double shift_uniform = 0;  // K f_H(gamma_step)
  double shift_final = 0;    // K f_H(final_gap)
  double shift_scale = 1;    // 1 for the faithful family; mutation tests lower it

  double level(long long j) const;  // x_j, j in [-(m+1), m+1]
  double x_m() const { return static_cast<double>(m) * delta; }
  // t_{i-1} for cell i in [1, k]; long double keeps the index product exact-ish.
  double cell_start(long double i) const;
  double cell_gap(long double i) const;
  double cell_shift(long double i) const;
  long double bracket_count() const;  // (k + 1)(2m + 2)

  // Cell index j with x_{j-1} < x <= x_j.
  long long level_cell(double x) const;
};

// Throws ResourceError when k or m do not fit the index types, and
// DomainError when a structural invariant fails.
BracketFamily build_brackets(const ModulusParams& p);

struct WidthReport {
  double max_inner_width = 0;  // max Phi-difference over inner cells
  double max_tail_width = 0;   // max 1 - Phi((x_m - shift) / t^H)
  std::size_t violations = 0;
  bool exhaustive = false;
  double cells_checked = 0;
  bool ok() const { return violations == 0; }
};

// Checks every cell's analytic d_P^2 bound against u^2 + 1e-12. Families with at
// most `exhaustive_limit` cells are scanned cell by cell; larger ones use the
// exact reduction to the extremal cells (i = 1 and j in {0, 1} for inner
// cells, the last two time cells for tails, and the final cell separately).
WidthReport verify_widths(const BracketFamily& fam, const ModulusParams& p,
                          double exhaustive_limit = 1e7);

struct CoveringReport {
  std::size_t probes = 0;
  std::size_t base_members = 0;      // paths in C(K) on the ensemble grid
  std::size_t min_members = 0;       // fewest members left after adding probe times
  double mean_members = 0;
  std::size_t member_checks = 0;
  std::size_t path_violations = 0;     // sandwich failures on ensemble paths
  std::size_t witness_checks = 0;
  std::size_t witness_violations = 0;  // sandwich failures on extremal C(K) paths
  std::size_t violations() const { return path_violations + witness_violations; }
};

// Draws probes (t, x), t in (gamma, T], and checks l_{i,j}(g) <= 1{g(t) <= x} <=
// v_{i,j}(g) for every ensemble path g in C(K) and for two extremal ramp paths
// of C(K) per probe. The family's time grid is vastly finer than any ensemble
// grid, so path values at t_{i-1} and t are drawn from the exact fBM
// conditional law given the path on the ensemble grid, and membership is
// decided on the grid augmented with those two times. The ensemble grid must
// be a Cholesky-sampled grid over [0, T].
CoveringReport verify_covering(const BracketFamily& fam, const ModulusParams& p,
                               const fbm::FbmEnsemble& ens, std::size_t probes,
                               std::uint64_t seed = 7);

double entropy_bound_1(const ModulusParams& p);
double entropy_bound_2(const ModulusParams& p);
// Bracket bound for pair-difference classes: the single bound at u/2, squared.
double pair_entropy_bound(const ModulusParams& p);

// Audit dump `kind,i,j,t_lo,t_hi,x_lo,x_hi,shift,width_sq`, one row per cell.
// Throws ResourceError beyond 1e8 cells.
void write_family_csv(const BracketFamily& fam, const ModulusParams& p, std::ostream& out);

}  // namespace proclab::brackets

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "proclab/gauss_num.hpp"
#include "proclab/harness.hpp"

using namespace proclab;
namespace ph = proclab::harness;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Serial reports of the default configs, reused by the determinism line.
std::map<std::string, std::string> serial_csv;

ph::ExperimentReport run_default(ph::ExperimentConfig cfg) {
  cfg.threads = 1;
  auto rep = ph::run(cfg);
  serial_csv[ph::to_string(cfg.experiment)] = rep.csv();
  return rep;
}

const ph::ReportRow* find_row(const ph::ExperimentReport& rep, const std::string& prefix) {
  for (const auto& r : rep.rows)
    if (r.name.rfind(prefix, 0) == 0) return &r;
  return nullptr;
}

bool row_passes(const ph::ExperimentReport& rep, const std::string& prefix) {
  const auto* r = find_row(rep, prefix);
  return r && r->pass().value_or(false);
}

std::string failing_rows(const ph::ExperimentReport& rep) {
  std::string out;
  char buf[160];
  for (const auto& r : rep.rows) {
    if (r.pass().value_or(true)) continue;
    std::snprintf(buf, sizeof buf, " %s=%.4g", r.name.c_str(), r.estimate);
    out += buf;
  }
  return out;
}

std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome gaussian_numerics() {
  double round_trip = 0, orthant = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double a = i / 1001.0;
    round_trip = std::max(round_trip, std::abs(gauss::std_normal_cdf(gauss::std_normal_quantile(a)) - a));
  }
  for (int i = -99; i <= 99; ++i) {
    const double r = i / 100.0;
    const double exact = 0.25 + std::asin(r) / (2.0 * std::numbers::pi);
    orthant = std::max(orthant, std::abs(gauss::bvn_cdf(0.0, 0.0, gauss::Correlation(r)) - exact));
  }
  return {round_trip <= 1e-11 && orthant <= 1e-7, fmt("round trip %.2e, orthant %.2e", round_trip, orthant)};
}

Outcome fbm_exactness() {
  bool ok = true;
  std::string detail;
  for (double h : {0.3, 0.5, 0.7}) {
    for (auto m : {fbm::Method::cholesky, fbm::Method::circulant}) {
      auto cfg = ph::default_config(ph::Experiment::cov_check);
      cfg.hurst = h;
      cfg.n_paths = 100000;
      cfg.grid = {0.0, 2.0, 16};
      cfg.method = m;
      cfg.threads = 1;
      const auto rep = ph::run(cfg);
      ok = ok && rep.pass();
      const auto* z = find_row(rep, "max_cov_z");
      detail += fmt(" h=%.1f:%.2f", h, z ? z->estimate : NAN);
      if (h == 0.5) {
        const auto* r = find_row(rep, "max_abs_increment_corr");
        ok = ok && r != nullptr;
        if (r) detail += fmt("/r=%.4f", r->estimate);
      }
    }
  }
  return {ok, "max z (chol, circ)" + detail};
}

Outcome swanson() {
  const auto rep = run_default(ph::default_config(ph::Experiment::swanson));
  std::string detail;
  for (const auto& r : rep.rows)
    if (r.target) detail += fmt(" %.3f", r.estimate) + fmt("/%.3f", *r.target);
  return {rep.pass(), "estimate/target" + detail};
}

Outcome prop3() {
  bool ok = true;
  std::string detail;
  for (double h : {0.3, 0.5}) {
    auto cfg = ph::default_config(ph::Experiment::prop3);
    cfg.hurst = h;
    cfg.replicates = 1000;
    const auto rep = h == 0.5 ? run_default(cfg) : ph::run(cfg);
    ok = ok && rep.pass();
    const auto* c = find_row(rep, "checks");
    detail += fmt(" h=%.1f checks %.0f", h, c ? c->estimate : NAN) + failing_rows(rep);
  }
  return {ok, detail.substr(1)};
}

Outcome variance_sup() {
  const auto rep = run_default(ph::default_config(ph::Experiment::lil_trace));
  const bool ok = row_passes(rep, "sup_var_unweighted") && row_passes(rep, "sup_var_argmax_x") &&
                  row_passes(rep, "sup_var_weighted") && row_passes(rep, "sup_var_weighted_argmax_t") &&
                  row_passes(rep, "indicator_variance");
  const auto* iv = find_row(rep, "indicator_variance");
  return {ok, fmt("indicator variance %.5f (SE %.1e)", iv ? iv->estimate : NAN, iv && iv->std_error ? *iv->std_error : NAN)};
}

Outcome bk_shape() {
  const auto rep = run_default(ph::default_config(ph::Experiment::bk_rate));
  const auto* s = find_row(rep, "loglog_slope");
  const auto* r = find_row(rep, "normalized_max_over_min");
  const bool ok = s && r && s->estimate > -0.35 && s->estimate < -0.05 && r->estimate < 3.0;
  return {ok, fmt("slope %.4f, max/min %.3f", s ? s->estimate : NAN, r ? r->estimate : NAN)};
}

Outcome brackets() {
  const auto rep = run_default(ph::default_config(ph::Experiment::brackets));
  return {rep.pass(), rep.pass() ? fmt("%.0f rows", static_cast<double>(rep.rows.size())) : failing_rows(rep)};
}

Outcome rate_ledger() {
  const auto rep = run_default(ph::default_config(ph::Experiment::rates));
  return {rep.pass(), rep.pass() ? fmt("%.0f rows", static_cast<double>(rep.rows.size())) : failing_rows(rep)};
}

Outcome limit_field() {
  const auto rep = run_default(ph::default_config(ph::Experiment::limit_sim));
  const auto* z = find_row(rep, "field_max_cov_z");
  const auto* v = find_row(rep, "swanson_var");
  return {rep.pass(), fmt("max cov z %.2f, Swanson var %.4f", z ? z->estimate : NAN, v ? v->estimate : NAN)};
}

Outcome determinism() {
  auto cov = ph::default_config(ph::Experiment::cov_check);
  run_default(cov);
  std::string differ;
  for (auto e : ph::all_experiments()) {
    const auto name = ph::to_string(e);
    auto cfg = ph::default_config(e);
    if (e == ph::Experiment::prop3) cfg.replicates = 1000;
    if (!serial_csv.count(name)) run_default(cfg);
    cfg.threads = 4;
    if (ph::run(cfg).csv() != serial_csv[name]) differ += " " + name;
  }
  return {differ.empty(), differ.empty() ? "all 8 experiments byte-identical" : "differ:" + differ};
}

}  // namespace

int main() {
  const std::vector<std::tuple<std::string, double, std::function<Outcome()>>> criteria = {
      {"gaussian numerics", 5, gaussian_numerics},
      {"fbm exactness", 120, fbm_exactness},
      {"swanson limit", 300, swanson},
      {"count identity (prop3)", 60, prop3},
      {"variance-sup identities", 30, variance_sup},
      {"bahadur-kiefer shape", 600, bk_shape},
      {"bracket battery", 180, brackets},
      {"rate ledger", 1, rate_ledger},
      {"limit field", 60, limit_field},
      {"determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& [name, budget, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget <= 0 || secs < budget;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s  %-26s %8.2f s%s  %s\n", pass ? "PASS" : "FAIL", name.c_str(), secs,
                in_time ? "" : fmt(" (budget %.0f s)", budget).c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

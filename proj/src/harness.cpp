#include "proclab/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "proclab/bracket_lab.hpp"
#include "proclab/empirical_lab.hpp"
#include "proclab/errors.hpp"
#include "proclab/limit_field.hpp"
#include "proclab/marginal_laws.hpp"
#include "proclab/rate_calc.hpp"
#include "proclab/rng.hpp"

namespace proclab::harness {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct MeanSe {
  double mean = 0;
  double se = 0;
};

MeanSe mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.slope_se = x.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return f;
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string label(const std::string& base, const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", value);
  return base + "[" + key + "=" + buf + "]";
}

ReportRow info(std::string name, double estimate, std::optional<double> se = std::nullopt) {
  ReportRow r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.std_error = se;
  return r;
}

ReportRow check(std::string name, double estimate, std::optional<double> se, double target, double tol,
                Compare cmp = Compare::within) {
  ReportRow r = info(std::move(name), estimate, se);
  r.target = target;
  r.tol = tol;
  r.compare = cmp;
  return r;
}

ExperimentReport start(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.experiment = cfg.experiment;
  rep.config = cfg;
  if (cfg.seed == 0) {
    std::random_device rd;
    rep.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    if (rep.seed == 0) rep.seed = 1;
    rep.reproducible = false;
    rep.notes.push_back("seed drawn from OS entropy; run is not reproducible");
  } else {
    rep.seed = cfg.seed;
  }
  rep.config.seed = rep.seed;
  return rep;
}

Parallelism par_of(const ExperimentConfig& cfg) { return {cfg.threads}; }

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::cov_check: return "cov-check";
    case Experiment::swanson: return "swanson";
    case Experiment::bk_rate: return "bk-rate";
    case Experiment::lil_trace: return "lil-trace";
    case Experiment::brackets: return "brackets";
    case Experiment::rates: return "rates";
    case Experiment::limit_sim: return "limit-sim";
    case Experiment::prop3: return "prop3";
  }
  return "?";
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all = {Experiment::cov_check, Experiment::swanson,  Experiment::bk_rate,
                                              Experiment::lil_trace, Experiment::brackets, Experiment::rates,
                                              Experiment::limit_sim, Experiment::prop3};
  return all;
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : all_experiments())
    if (to_string(e) == name) return e;
  throw UsageError("unknown experiment '" + name + "'");
}

fbm::TimeGrid GridSpec::build() const { return fbm::TimeGrid::uniform(t_min, t_max, count); }

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) || c.find(':') != std::string::npos)
    throw UsageError("grid must look like t_min:t_max:count, got '" + text + "'");
  try {
    std::size_t pos = 0;
    g.t_min = std::stod(a, &pos);
    if (pos != a.size()) throw std::invalid_argument("t_min");
    g.t_max = std::stod(b, &pos);
    if (pos != b.size()) throw std::invalid_argument("t_max");
    const long long cnt = std::stoll(c, &pos);
    if (pos != c.size() || cnt < 2) throw std::invalid_argument("count");
    g.count = static_cast<std::size_t>(cnt);
  } catch (const std::exception&) {
    throw UsageError("grid must look like t_min:t_max:count (count >= 2), got '" + text + "'");
  }
  if (!(g.t_min >= 0.0 && g.t_min < g.t_max)) throw UsageError("grid needs 0 <= t_min < t_max");
  return g;
}

void ExperimentConfig::validate() const {
  if (!(hurst > 0.0 && hurst < 1.0)) throw UsageError("hurst must lie in (0, 1)");
  if (n_paths < 1 || replicates < 1 || probes < 1 || alpha_grid_size < 1)
    throw UsageError("counts must be >= 1");
  if (!(grid.t_min >= 0.0 && grid.t_min < grid.t_max) || grid.count < 2) throw UsageError("invalid grid");
  if (!(gamma >= 0.0)) throw UsageError("gamma must be >= 0");
  if (!(rho > 0.0 && rho < 0.5)) throw UsageError("rho must lie in (0, 1/2)");
  if (!(kappa >= 0.0)) throw UsageError("kappa must be >= 0");
  if (threads < 1) throw UsageError("threads must be >= 1");
  if (format != "csv" && format != "json") throw UsageError("format must be csv or json");
  if (method == fbm::Method::circulant && grid.t_min != 0.0)
    throw UsageError("circulant sampling needs a grid starting at 0");
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  j["experiment"] = to_string(experiment);
  j["hurst"] = hurst;
  j["grid"] = fmt_num(grid.t_min) + ":" + fmt_num(grid.t_max) + ":" + std::to_string(grid.count);
  j["n_paths"] = n_paths;
  j["replicates"] = replicates;
  j["seed"] = seed;
  j["gamma"] = gamma;
  j["rho"] = rho;
  j["kappa"] = kappa;
  j["delta"] = delta;
  j["n_list"] = n_list;
  j["alpha_grid_size"] = alpha_grid_size;
  j["probes"] = probes;
  j["method"] = method == fbm::Method::circulant ? "circulant" : "cholesky";
  j["threads"] = threads;
  j["format"] = format;
  return j;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::cov_check:
      c.grid = {0.0, 2.0, 16};
      c.n_paths = 50000;
      c.seed = 1;
      break;
    case Experiment::swanson:
      c.grid = {0.0, 4.0, 5};
      c.n_paths = 201;
      c.replicates = 2000;
      c.seed = 2;
      break;
    case Experiment::bk_rate:
      c.grid = {0.0, 2.0, 33};
      c.n_list = {64, 128, 256, 512, 1024, 2048, 4096};
      c.replicates = 200;
      c.method = fbm::Method::circulant;
      c.seed = 3;
      break;
    case Experiment::lil_trace:
      c.grid = {0.0, 2.0, 33};
      c.n_list = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
      c.n_paths = 10000;  // indicator-variance sample
      c.method = fbm::Method::circulant;
      c.seed = 4;
      break;
    case Experiment::brackets:
      c.grid = {0.0, 2.0, 64};
      c.gamma = 0.05;
      c.n_paths = 1200;
      c.probes = 10000;
      c.seed = 5;
      break;
    case Experiment::rates:
      c.kappa = 0.5;
      c.replicates = 1000;
      c.seed = 6;
      break;
    case Experiment::limit_sim:
      c.n_paths = 50000;
      c.seed = 7;
      break;
    case Experiment::prop3:
      c.grid = {0.0, 2.0, 16};
      c.gamma = 0.125;
      c.n_paths = 17;
      c.replicates = 1000;
      c.seed = 8;
      break;
  }
  return c;
}

void apply_json(ExperimentConfig& cfg, const json& obj) {
  if (!obj.is_object()) throw UsageError("config must be a flat JSON object");
  try {
    for (const auto& [key, v] : obj.items()) {
      if (key == "experiment") {
        cfg.experiment = parse_experiment(v.get<std::string>());
      } else if (key == "hurst") {
        cfg.hurst = v.get<double>();
      } else if (key == "grid") {
        cfg.grid = parse_grid(v.get<std::string>());
      } else if (key == "n_paths") {
        cfg.n_paths = v.get<std::size_t>();
      } else if (key == "replicates") {
        cfg.replicates = v.get<std::size_t>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "gamma") {
        cfg.gamma = v.get<double>();
      } else if (key == "rho") {
        cfg.rho = v.get<double>();
      } else if (key == "kappa") {
        cfg.kappa = v.get<double>();
      } else if (key == "delta") {
        cfg.delta = v.get<double>();
      } else if (key == "n_list") {
        cfg.n_list = v.get<std::vector<std::size_t>>();
      } else if (key == "alpha_grid_size") {
        cfg.alpha_grid_size = v.get<std::size_t>();
      } else if (key == "probes") {
        cfg.probes = v.get<std::size_t>();
      } else if (key == "method") {
        const auto m = v.get<std::string>();
        if (m != "cholesky" && m != "circulant") throw UsageError("method must be cholesky or circulant");
        cfg.method = m == "circulant" ? fbm::Method::circulant : fbm::Method::cholesky;
      } else if (key == "threads") {
        cfg.threads = v.get<int>();
      } else if (key == "out") {
        cfg.out_path = v.get<std::string>();
      } else if (key == "format") {
        cfg.format = v.get<std::string>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
}

std::optional<bool> ReportRow::pass() const {
  if (!target || !tol) return std::nullopt;
  if (std::isnan(estimate)) return false;
  switch (compare) {
    case Compare::within: return std::abs(estimate - *target) <= *tol;
    case Compare::at_most: return estimate <= *target + *tol;
    case Compare::at_least: return estimate >= *target - *tol;
  }
  return false;
}

bool ExperimentReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass().value_or(true); });
}

void ExperimentReport::write_csv(std::ostream& out) const {
  auto opt = [](const std::optional<double>& v) { return v ? fmt_num(*v) : std::string("NA"); };
  out << "name,estimate,std_error,target,tol,pass\n";
  for (const auto& r : rows) {
    const auto p = r.pass();
    out << r.name << ',' << fmt_num(r.estimate) << ',' << opt(r.std_error) << ',' << opt(r.target) << ','
        << opt(r.tol) << ',' << (p ? (*p ? "true" : "false") : "NA") << '\n';
  }
}

std::string ExperimentReport::csv() const {
  std::ostringstream s;
  write_csv(s);
  return s.str();
}

ordered_json ExperimentReport::to_json() const {
  ordered_json j;
  j["experiment"] = to_string(experiment);
  j["pass"] = pass();
  ordered_json rows_j = ordered_json::array();
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  for (const auto& r : rows) {
    ordered_json rj;
    rj["name"] = r.name;
    rj["estimate"] = r.estimate;
    rj["std_error"] = opt(r.std_error);
    rj["target"] = opt(r.target);
    rj["tol"] = opt(r.tol);
    rj["compare"] = r.compare == Compare::within ? "within" : r.compare == Compare::at_most ? "at_most" : "at_least";
    const auto p = r.pass();
    rj["pass"] = p ? ordered_json(*p) : ordered_json(nullptr);
    rows_j.push_back(rj);
  }
  j["rows"] = rows_j;
  ordered_json meta;
  meta["params"] = config.to_json();
  meta["seed"] = seed;
  meta["reproducible"] = reproducible;
  meta["version"] = kVersion;
  meta["seconds"] = seconds;
  meta["tolerance_convention"] = "3 SE for single Monte Carlo comparisons, 4 SE for a maximum over many";
  meta["notes"] = notes;
  j["meta"] = meta;
  return j;
}

// ---------------------------------------------------------------------------

ExperimentReport run_cov_check(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg);
  const fbm::HurstIndex h(cfg.hurst);
  const auto grid = cfg.grid.build();
  const auto ens = fbm::sample(cfg.method, h, grid, cfg.n_paths, rep.seed, par_of(cfg));
  const std::size_t n = cfg.n_paths;

  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (grid[j] > 0.0) idx.push_back(j);

  double max_abs = 0.0, max_z = 0.0;
  std::vector<double> prod(n);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a; b < idx.size(); ++b) {
      for (std::size_t i = 0; i < n; ++i) prod[i] = ens.value(i, idx[a]) * ens.value(i, idx[b]);
      const auto ms = mean_se(prod);
      const double err = std::abs(ms.mean - fbm::fbm_cov(h, grid[idx[a]], grid[idx[b]]));
      max_abs = std::max(max_abs, err);
      max_z = std::max(max_z, ms.se > 0.0 ? err / ms.se : (err > 0.0 ? INFINITY : 0.0));
    }
  }
  rep.add(info("max_abs_cov_error", max_abs));
  rep.add(check("max_cov_z", max_z, std::nullopt, 0.0, 4.0, Compare::at_most));

  if (cfg.hurst == 0.5 && grid.size() >= 3) {
    // lag-one correlation of consecutive increments, known mean zero
    double worst = 0.0;
    for (std::size_t j = 0; j + 2 < grid.size(); ++j) {
      double s12 = 0, s11 = 0, s22 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d1 = ens.value(i, j + 1) - ens.value(i, j);
        const double d2 = ens.value(i, j + 2) - ens.value(i, j + 1);
        s12 += d1 * d2;
        s11 += d1 * d1;
        s22 += d2 * d2;
      }
      worst = std::max(worst, std::abs(s12 / std::sqrt(s11 * s22)));
    }
    rep.add(check("max_abs_increment_corr", worst, 1.0 / std::sqrt(static_cast<double>(n)), 0.0,
                  3.0 / std::sqrt(static_cast<double>(n)), Compare::at_most));
  }
  if (n < 100) {
    rep.notes.push_back("underpowered: fewer than 100 paths, standard errors are unreliable");
    rep.add(info("underpowered", 1.0));
  }
  return rep;
}

ExperimentReport run_swanson(const ExperimentConfig& cfg) {
  if (cfg.n_paths % 2 == 0) throw UsageError("swanson needs an odd number of paths");
  if (cfg.hurst != 0.5) throw UsageError("swanson is the H = 1/2 median limit; use --hurst 0.5");
  ExperimentReport rep = start(cfg);
  const fbm::HurstIndex h(0.5);
  const fbm::TimeGrid grid({1.0, 2.0, 4.0});
  const std::size_t reps = cfg.replicates;
  const double root_n = std::sqrt(static_cast<double>(cfg.n_paths));

  std::vector<std::array<double, 3>> med(reps);
#pragma omp parallel for schedule(static) num_threads(cfg.threads)
  for (std::size_t r = 0; r < reps; ++r) {
    const auto ens = fbm::sample_cholesky(h, grid, cfg.n_paths, stream_seed(rep.seed, r));
    for (std::size_t k = 0; k < 3; ++k) med[r][k] = root_n * empirical::median_process(ens, grid[k]);
  }
  rep.notes.push_back("median times fixed at t = 1, 2, 4");

  const std::array<std::pair<std::size_t, std::size_t>, 3> pairs = {{{0, 0}, {0, 2}, {1, 1}}};
  std::vector<double> prod(reps);
  for (auto [a, b] : pairs) {
    for (std::size_t r = 0; r < reps; ++r) prod[r] = med[r][a] * med[r][b];
    const auto ms = mean_se(prod);
    const double target = laws::swanson_kernel(grid[a], grid[b]);
    char name[64];
    std::snprintf(name, sizeof name, "cov_sqrt_n_median[%g,%g]", grid[a], grid[b]);
    rep.add(check(name, ms.mean, ms.se, target, std::max(4.0 * ms.se, 0.05 * target)));
  }
  return rep;
}

ExperimentReport run_bk_rate(const ExperimentConfig& cfg) {
  const auto& nl = cfg.n_list;
  if (nl.size() < 4) throw UsageError("bk-rate needs at least 4 sample sizes");
  for (std::size_t i = 0; i < nl.size(); ++i) {
    if (!is_power_of_two(nl[i]) || nl[i] < 64) throw UsageError("bk-rate sample sizes must be powers of two >= 64");
    if (i > 0 && nl[i] <= nl[i - 1]) throw UsageError("bk-rate sample sizes must increase");
  }
  const bool weighted = cfg.kappa > 0.0;
  if (weighted && std::abs(cfg.kappa - cfg.hurst) > 1e-12)
    throw UsageError("weighted bk-rate uses kappa = H");
  ExperimentReport rep = start(cfg);
  const fbm::HurstIndex h(cfg.hurst);
  const auto grid = cfg.grid.build();
  empirical::EvalWindow w;
  w.gamma = weighted ? 0.0 : cfg.gamma;
  w.t_max = cfg.grid.t_max;
  w.rho = cfg.rho;
  w.kappa = cfg.kappa;
  if (!weighted && !(cfg.gamma > 0.0)) throw UsageError("bk-rate needs gamma > 0");
  if (weighted) rep.notes.push_back("weighted remainder over [0, T] with weight t^H");

  std::vector<double> log_n, log_mean, normalized;
  for (std::size_t n : nl) {
    std::vector<double> sup(cfg.replicates);
#pragma omp parallel for schedule(static) num_threads(cfg.threads)
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      const auto ens = fbm::sample(cfg.method, h, grid, n, stream_seed(rep.seed, n, r));
      sup[r] = empirical::bk_remainder(ens, w, cfg.alpha_grid_size).value;
    }
    const auto ms = mean_se(sup);
    const double dn = static_cast<double>(n);
    rep.add(info(label("mean_sup_remainder", "n", dn), ms.mean, ms.se));
    log_n.push_back(std::log(dn));
    log_mean.push_back(std::log(ms.mean));
    normalized.push_back(ms.mean * std::pow(dn, 0.25) / (std::sqrt(std::log(dn)) * std::pow(std::log(std::log(dn)), 0.25)));
  }
  for (std::size_t i = 0; i < nl.size(); ++i)
    rep.add(info(label("normalized_remainder", "n", static_cast<double>(nl[i])), normalized[i]));

  const auto fit = least_squares(log_n, log_mean);
  if (weighted)
    rep.add(check("loglog_slope", fit.slope, fit.slope_se, 0.0, 0.0, Compare::at_most));
  else
    rep.add(check("loglog_slope", fit.slope, fit.slope_se, -0.2, 0.15));
  rep.add(info("slope_ci95_halfwidth", 1.96 * fit.slope_se));
  const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
  rep.add(check("normalized_max_over_min", *hi / *lo, std::nullopt, 3.0, 0.0, Compare::at_most));
  return rep;
}

ExperimentReport run_prop3(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg);
  const fbm::HurstIndex h(cfg.hurst);
  const auto grid = cfg.grid.build();
  empirical::EvalWindow w;
  w.gamma = cfg.gamma;
  w.t_max = cfg.grid.t_max;
  w.rho = cfg.rho;

  std::vector<empirical::Prop3Report> per(cfg.replicates);
#pragma omp parallel for schedule(static) num_threads(cfg.threads)
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const auto ens = fbm::sample(cfg.method, h, grid, cfg.n_paths, stream_seed(rep.seed, r));
    per[r] = empirical::prop3_check(ens, w, cfg.alpha_grid_size);
  }
  double checks = 0, id = 0, bound = 0, ties = 0;
  for (const auto& p : per) {
    checks += static_cast<double>(p.checks);
    id += static_cast<double>(p.identity_violations);
    bound += static_cast<double>(p.bound_violations);
    ties += static_cast<double>(p.ties);
  }
  rep.add(info("checks", checks));
  rep.add(info("tie_bound_m", per.empty() ? 0.0 : per.front().m));
  rep.add(info("tied_cross_sections", ties));
  rep.add(check("identity_violations", id, std::nullopt, 0.0, 0.0, Compare::at_most));
  rep.add(check("bound_violations", bound, std::nullopt, 0.0, 0.0, Compare::at_most));
  return rep;
}

ExperimentReport run_lil_trace(const ExperimentConfig& cfg) {
  const auto& nl = cfg.n_list;
  if (nl.empty()) throw UsageError("lil-trace needs a sample size list");
  for (std::size_t i = 0; i < nl.size(); ++i) {
    if (nl[i] < 16) throw UsageError("lil-trace sample sizes must be >= 16");
    if (i > 0 && nl[i] <= nl[i - 1]) throw UsageError("lil-trace sample sizes must increase");
  }
  ExperimentReport rep = start(cfg);
  const fbm::HurstIndex h(cfg.hurst);
  const auto grid = cfg.grid.build();
  const double big_t = cfg.grid.t_max;
  empirical::EvalWindow w;
  w.gamma = cfg.gamma;
  w.t_max = big_t;
  w.rho = cfg.rho;
  w.kappa = cfg.kappa;
  const double sigma = cfg.kappa > 0.0 ? std::pow(big_t, cfg.kappa) / 2.0 : 0.5;
  rep.notes.push_back("the limsup itself is not checked; log log n stays small at these n");

  double worst = 0.0;
  std::vector<double> trace(nl.size());
#pragma omp parallel for schedule(static) num_threads(cfg.threads)
  for (std::size_t a = 0; a < nl.size(); ++a) {
    const auto ens = fbm::sample(cfg.method, h, grid, nl[a], stream_seed(rep.seed, nl[a]));
    const double ll = std::log(std::log(static_cast<double>(nl[a])));
    trace[a] = empirical::sup_vn(ens, w).value / std::sqrt(2.0 * ll);
  }
  for (std::size_t a = 0; a < nl.size(); ++a) {
    rep.add(info(label("lil_trace", "n", static_cast<double>(nl[a])), trace[a]));
    worst = std::max(worst, trace[a]);
  }
  rep.add(check("max_lil_trace", worst, std::nullopt, 1.5 * sigma, 0.0, Compare::at_most));

  // Analytic variance sup over the window grid and an x grid through 0.
  double best = -1.0, best_x = NAN;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = grid[j];
    if (!w.contains(t) || t == 0.0) continue;
    const double s = std::pow(t, cfg.hurst);
    for (int k = -300; k <= 300; ++k) {
      const double x = 3.0 * s * k / 300.0;
      const double v = laws::limit_cov_kernel(h, {t, x}, {t, x});
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  }
  rep.add(check("sup_var_unweighted", best, std::nullopt, 0.25, 1e-10));
  rep.add(check("sup_var_argmax_x", best_x, std::nullopt, 0.0, 0.0));

  const double kw = cfg.kappa > 0.0 ? cfg.kappa : cfg.hurst;
  double wbest = -1.0, wbest_t = NAN;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = grid[j];
    for (int k = -300; k <= 300; ++k) {
      const double x = 3.0 * std::pow(std::max(t, 1e-300), cfg.hurst) * k / 300.0;
      const double v = laws::weighted_cov_kernel(h, kw, {t, x}, {t, x});
      if (v > wbest) {
        wbest = v;
        wbest_t = t;
      }
    }
  }
  rep.add(check(label("sup_var_weighted", "kappa", kw), wbest, std::nullopt, std::pow(big_t, 2.0 * kw) / 4.0, 1e-10));
  rep.add(check("sup_var_weighted_argmax_t", wbest_t, std::nullopt, big_t, 0.0));

  // Indicator variance at (T, 0): unbiased batch variances of 1{B(T) <= 0}.
  const std::size_t batches = 50;
  const std::size_t per_batch = std::max<std::size_t>(2, cfg.n_paths / batches);
  std::vector<double> var(batches);
  const fbm::TimeGrid end({big_t / 2.0, big_t});
#pragma omp parallel for schedule(static) num_threads(cfg.threads)
  for (std::size_t b = 0; b < batches; ++b) {
    const auto ens = fbm::sample_cholesky(h, end, per_batch, stream_seed(rep.seed, 0x1d1ca7u, b));
    double hits = 0;
    for (std::size_t i = 0; i < per_batch; ++i) hits += ens.value(i, 1) <= 0.0 ? 1.0 : 0.0;
    const double p = hits / static_cast<double>(per_batch);
    var[b] = p * (1.0 - p) * static_cast<double>(per_batch) / static_cast<double>(per_batch - 1);
  }
  const auto ms = mean_se(var);
  rep.add(check("indicator_variance[T,0]", ms.mean, ms.se, 0.25, 3.0 * ms.se));
  return rep;
}

ExperimentReport run_brackets(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg);
  const double big_t = cfg.grid.t_max;
  if (big_t < 1.0) throw UsageError("brackets need T = grid t_max >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0 / std::numbers::e)) throw UsageError("brackets need gamma in (0, 1/e)");
  const fbm::TimeGrid grid = fbm::TimeGrid::uniform(0.0, big_t, cfg.grid.count);
  const std::array<double, 3> hs = {0.3, 0.5, 0.7};
  const std::array<double, 2> us = {0.05, 0.02};
  const std::array<double, 2> ks = {std::numbers::e, 3.0};
  rep.notes.push_back("battery over H in {0.3, 0.5, 0.7}, u in {0.05, 0.02}, K in {e, 3}; --hurst is ignored");

  for (std::size_t hi = 0; hi < hs.size(); ++hi) {
    const fbm::HurstIndex h(hs[hi]);
    const auto ens = fbm::sample_cholesky(h, grid, cfg.n_paths, stream_seed(rep.seed, hi), par_of(cfg));
    for (std::size_t ui = 0; ui < us.size(); ++ui) {
      for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        brackets::ModulusParams p;
        p.h = h;
        p.u = us[ui];
        p.gamma = cfg.gamma;
        p.k_const = ks[ki];
        p.t_max = big_t;
        char tag[96];
        std::snprintf(tag, sizeof tag, "[h=%g,u=%g,K=%.4g]", hs[hi], us[ui], ks[ki]);
        const std::string t(tag);

        const auto fam = brackets::build_brackets(p);
        const auto wr = brackets::verify_widths(fam, p);
        const std::uint64_t probe_seed = stream_seed(rep.seed, 100 + hi, 10 * ui + ki);
        const auto cov = brackets::verify_covering(fam, p, ens, cfg.probes, probe_seed);
        auto mutated = fam;
        mutated.shift_scale = 0.5;
        const auto mut = brackets::verify_covering(mutated, p, ens, cfg.probes, probe_seed);

        rep.add(info("bracket_count" + t, static_cast<double>(fam.bracket_count())));
        rep.add(check("eb1_over_count" + t, brackets::entropy_bound_1(p) / static_cast<double>(fam.bracket_count()),
                      std::nullopt, 1.0, 0.0, Compare::at_least));
        rep.add(info("max_inner_width_over_u2" + t, wr.max_inner_width / (p.u * p.u)));
        rep.add(info("max_tail_width_over_u2" + t, wr.max_tail_width / (p.u * p.u)));
        rep.add(check("width_violations" + t, static_cast<double>(wr.violations), std::nullopt, 0, 0, Compare::at_most));
        rep.add(check("member_paths" + t, static_cast<double>(cov.base_members), std::nullopt, 500, 0, Compare::at_least));
        rep.add(info("mean_members_per_probe" + t, cov.mean_members));
        rep.add(check("covering_violations" + t, static_cast<double>(cov.violations()), std::nullopt, 0, 0,
                      Compare::at_most));
        rep.add(check("mutation_violations" + t, static_cast<double>(mut.violations()), std::nullopt, 1, 0,
                      Compare::at_least));
      }
    }
  }

  // Count growth in u^{-1} on dyadic u (small enough for the log factors to settle).
  for (double hv : hs) {
    std::vector<double> x, y;
    for (int e = 12; e <= 15; ++e) {
      brackets::ModulusParams p;
      p.h = fbm::HurstIndex(hv);
      p.u = std::ldexp(1.0, -e);
      p.gamma = cfg.gamma;
      p.t_max = big_t;
      const auto fam = brackets::build_brackets(p);
      x.push_back(std::log(1.0 / p.u));
      y.push_back(std::log(static_cast<double>(fam.bracket_count())));
    }
    const auto fit = least_squares(x, y);
    rep.add(check(label("count_slope", "h", hv), fit.slope, fit.slope_se, 2.0 * (1.0 + 1.0 / hv), 0.5));
  }
  return rep;
}

ExperimentReport run_rates(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg);
  Engine rng = make_stream(rep.seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double id1 = 0, id2 = 0, min_tau2 = INFINITY, mu_mismatch = 0;
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const double hv = 0.01 + 0.98 * unif(rng);
    const fbm::HurstIndex h(hv);
    const auto b = rates::base_exponents(h);
    const double kappa = 0.01 + 5.0 * unif(rng);
    id1 = std::max(id1, std::abs(rates::tau1(h, 0.0) * (2.0 + 4.0 * b.nu0) - 1.0));
    const double es = rates::eta_star(h, kappa);
    id2 = std::max(id2, std::abs(rates::tau1(h, es) - kappa * es));
    min_tau2 = std::min(min_tau2, b.tau2 - 0.5);
    const double cap = hv / (4.0 * b.h0);
    const double delta = 2.0 * cap * unif(rng);
    bool positive;
    try {
      positive = rates::corollary_rates(h, delta).mu > 0.0;
    } catch (const DomainError&) {
      positive = false;
    }
    if (positive != (delta > 0.0 && delta < cap)) ++mu_mismatch;
    // the boundary itself is excluded
    try {
      rates::corollary_rates(h, cap);
      ++mu_mismatch;
    } catch (const DomainError&) {
    }
  }
  rep.add(check("max_abs[tau1(0)(2+4nu0)-1]", id1, std::nullopt, 0.0, 1e-12, Compare::at_most));
  rep.add(check("max_abs[tau1(eta*)-kappa*eta*]", id2, std::nullopt, 0.0, 1e-12, Compare::at_most));
  rep.add(check("min[tau2-1/2]", min_tau2, std::nullopt, 0.0, 0.0, Compare::at_least));
  rep.add(check("mu_sign_mismatches", mu_mismatch, std::nullopt, 0.0, 0.0, Compare::at_most));

  const fbm::HurstIndex half(0.5);
  const auto b = rates::base_exponents(half);
  rep.add(check("nu0[h=0.5]", b.nu0, std::nullopt, 6.0, 1e-12));
  rep.add(check("h0[h=0.5]", b.h0, std::nullopt, 1.5, 1e-12));
  rep.add(check("tau2[h=0.5]", b.tau2, std::nullopt, 14.0 / 13.0, 1e-12));
  rep.add(check("tau1_at_0[h=0.5]", rates::tau1(half, 0.0), std::nullopt, 1.0 / 26.0, 1e-12));
  rep.add(check("m_ties[h=0.5]", rates::tie_bound(half), std::nullopt, 10.0, 0.0));
  if (cfg.kappa > 0.0) {
    const double k = cfg.kappa;
    rep.add(info(label("tau1_prime[h=0.5]", "kappa", k), rates::tau1_prime(half, k)));
    rep.add(info(label("eta_star[h=0.5]", "kappa", k), rates::eta_star(half, k)));
  }
  return rep;
}

ExperimentReport run_limit_sim(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg);
  field::FieldSpec spec;
  spec.hurst = fbm::HurstIndex(cfg.hurst);
  spec.kappa = cfg.kappa;
  spec.points = {{0.25, 0.1}, {0.5, -0.3}, {0.5, 0.4}, {1.0, 0.0}, {1.0, 0.8}, {1.5, -0.6}, {2.0, 0.0}, {2.0, 1.2}};
  const auto cov = field::build_cov_matrix(spec);
  const auto s = field::sample_field(spec, cfg.n_paths, rep.seed, par_of(cfg));
  const std::size_t n = cfg.n_paths;
  const std::size_t d = spec.points.size();
  std::vector<double> prod(n);
  double max_z = 0.0, max_abs = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      for (std::size_t i = 0; i < n; ++i) prod[i] = s.value(i, a) * s.value(i, b);
      const auto ms = mean_se(prod);
      const double err = std::abs(ms.mean - cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      max_abs = std::max(max_abs, err);
      max_z = std::max(max_z, err / ms.se);
    }
  }
  rep.add(info("field_nugget", s.nugget_used));
  rep.add(info("field_max_abs_cov_error", max_abs));
  rep.add(check("field_max_cov_z", max_z, std::nullopt, 0.0, 4.0, Compare::at_most));

  const auto sw = field::sample_swanson({0.0, 1.0, 4.0}, n, stream_seed(rep.seed, 1), par_of(cfg));
  std::vector<double> v1(n), v14(n);
  double zero_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v1[i] = sw.value(i, 1) * sw.value(i, 1);
    v14[i] = sw.value(i, 1) * sw.value(i, 2);
    zero_max = std::max(zero_max, std::abs(sw.value(i, 0)));
  }
  const auto m1 = mean_se(v1);
  const auto m14 = mean_se(v14);
  rep.add(check("swanson_var[t=1]", m1.mean, m1.se, std::numbers::pi / 2.0, 3.0 * m1.se));
  rep.add(check("swanson_cov[1,4]", m14.mean, m14.se, std::numbers::pi / 3.0, 3.0 * m14.se));
  rep.add(check("swanson_abs_x0", zero_max, std::nullopt, 0.0, 0.0));
  return rep;
}

ExperimentReport run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  switch (cfg.experiment) {
    case Experiment::cov_check: rep = run_cov_check(cfg); break;
    case Experiment::swanson: rep = run_swanson(cfg); break;
    case Experiment::bk_rate: rep = run_bk_rate(cfg); break;
    case Experiment::lil_trace: rep = run_lil_trace(cfg); break;
    case Experiment::brackets: rep = run_brackets(cfg); break;
    case Experiment::rates: rep = run_rates(cfg); break;
    case Experiment::limit_sim: rep = run_limit_sim(cfg); break;
    case Experiment::prop3: rep = run_prop3(cfg); break;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

void write_rates_table(const ExperimentConfig& cfg, std::ostream& out) {
  std::vector<rates::RateTableRow> rows;
  for (int i = 1; i <= 19; ++i) rows.push_back(rates::rate_row(fbm::HurstIndex(0.05 * i), cfg.kappa, cfg.delta));
  rates::write_rate_table(rows, out);
}

}  // namespace proclab::harness

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "proclab/fbm_engine.hpp"

namespace proclab::harness {

inline constexpr const char* kVersion = "0.1.0";

// Bad configuration or command line; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { cov_check, swanson, bk_rate, lil_trace, brackets, rates, limit_sim, prop3 };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);
const std::vector<Experiment>& all_experiments();

struct GridSpec {
  double t_min = 0;
  double t_max = 2;
  std::size_t count = 16;
  fbm::TimeGrid build() const;
};

// Parses `a:b:count`.
GridSpec parse_grid(const std::string& text);

struct ExperimentConfig {
  Experiment experiment = Experiment::cov_check;
  double hurst = 0.5;
  GridSpec grid;
  std::size_t n_paths = 1;
  std::size_t replicates = 1;
  std::uint64_t seed = 1;  // 0 draws from the OS and makes the run non-reproducible
  double gamma = 0.25;
  double rho = 0.2;
  double kappa = 0;
  double delta = 0.01;
  std::vector<std::size_t> n_list;
  std::size_t alpha_grid_size = 99;
  std::size_t probes = 10000;
  fbm::Method method = fbm::Method::cholesky;
  int threads = 1;
  std::string out_path;
  std::string format = "csv";

  void validate() const;
  nlohmann::ordered_json to_json() const;
};

// Defaults of each experiment, including its fixed seed.
ExperimentConfig default_config(Experiment e);

// Applies the keys of a flat JSON object onto `cfg`. Unknown keys are usage errors.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& obj);

enum class Compare {
  within,    // |estimate - target| <= tol
  at_most,   // estimate <= target + tol
  at_least,  // estimate >= target - tol
};

struct ReportRow {
  std::string name;
  double estimate = 0;
  std::optional<double> std_error;
  std::optional<double> target;
  std::optional<double> tol;
  Compare compare = Compare::within;

  // Empty when the row has no target.
  std::optional<bool> pass() const;
};

struct ExperimentReport {
  Experiment experiment = Experiment::cov_check;
  ExperimentConfig config;
  std::uint64_t seed = 0;
  bool reproducible = true;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  double seconds = 0;

  bool pass() const;
  void add(ReportRow row) { rows.push_back(std::move(row)); }

  // `name,estimate,std_error,target,tol,pass`; NA for absent fields.
  void write_csv(std::ostream& out) const;
  std::string csv() const;
  nlohmann::ordered_json to_json() const;
};

ExperimentReport run_cov_check(const ExperimentConfig& cfg);
ExperimentReport run_swanson(const ExperimentConfig& cfg);
ExperimentReport run_bk_rate(const ExperimentConfig& cfg);
ExperimentReport run_prop3(const ExperimentConfig& cfg);
ExperimentReport run_lil_trace(const ExperimentConfig& cfg);
ExperimentReport run_brackets(const ExperimentConfig& cfg);
ExperimentReport run_rates(const ExperimentConfig& cfg);
ExperimentReport run_limit_sim(const ExperimentConfig& cfg);

ExperimentReport run(const ExperimentConfig& cfg);

// h sweep printed by the `rates` command.
void write_rates_table(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace proclab::harness

// proclab: run an experiment and write its report, or dump samples.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "proclab/bracket_lab.hpp"
#include "proclab/errors.hpp"
#include "proclab/fbm_engine.hpp"
#include "proclab/harness.hpp"
#include "proclab/limit_field.hpp"

namespace ph = proclab::harness;

namespace {

struct Flags {
  std::string config;
  std::optional<double> hurst, gamma, rho, kappa, delta;
  std::optional<std::string> grid, n_list, out, format, method;
  std::optional<std::size_t> n_paths, replicates, probes, alpha_grid_size;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "flat JSON config file");
  cmd->add_option("--hurst", f.hurst, "Hurst index H");
  cmd->add_option("--grid", f.grid, "time grid t_min:t_max:count");
  cmd->add_option("--n-paths", f.n_paths, "paths per ensemble (samples for limit-sim)");
  cmd->add_option("--replicates", f.replicates, "independent ensembles");
  cmd->add_option("--seed", f.seed, "master seed; 0 draws from the OS");
  cmd->add_option("--gamma", f.gamma, "lower time of the window");
  cmd->add_option("--rho", f.rho, "quantile band level");
  cmd->add_option("--kappa", f.kappa, "weight exponent");
  cmd->add_option("--delta", f.delta, "rate offset delta");
  cmd->add_option("--n-list", f.n_list, "comma separated sample sizes");
  cmd->add_option("--alpha-grid", f.alpha_grid_size, "number of quantile levels");
  cmd->add_option("--probes", f.probes, "covering probes per bracket family");
  cmd->add_option("--method", f.method, "cholesky or circulant");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--format", f.format, "csv or json");
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ph::UsageError("bad --n-list entry '" + item + "'");
    }
  }
  return out;
}

ph::ExperimentConfig resolve(ph::Experiment e, const Flags& f) {
  auto cfg = ph::default_config(e);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ph::UsageError("cannot open config " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& ex) {
      throw ph::UsageError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (j.contains("experiment") && j["experiment"] != ph::to_string(e))
      throw ph::UsageError("config names a different experiment");
    ph::apply_json(cfg, j);
  }
  if (f.hurst) cfg.hurst = *f.hurst;
  if (f.grid) cfg.grid = ph::parse_grid(*f.grid);
  if (f.n_paths) cfg.n_paths = *f.n_paths;
  if (f.replicates) cfg.replicates = *f.replicates;
  if (f.seed) cfg.seed = *f.seed;
  if (f.gamma) cfg.gamma = *f.gamma;
  if (f.rho) cfg.rho = *f.rho;
  if (f.kappa) cfg.kappa = *f.kappa;
  if (f.delta) cfg.delta = *f.delta;
  if (f.n_list) cfg.n_list = parse_list(*f.n_list);
  if (f.alpha_grid_size) cfg.alpha_grid_size = *f.alpha_grid_size;
  if (f.probes) cfg.probes = *f.probes;
  if (f.method) {
    if (*f.method != "cholesky" && *f.method != "circulant") throw ph::UsageError("method must be cholesky or circulant");
    cfg.method = *f.method == "circulant" ? proclab::fbm::Method::circulant : proclab::fbm::Method::cholesky;
  }
  if (f.threads) cfg.threads = *f.threads;
  if (f.out) cfg.out_path = *f.out;
  if (f.format) cfg.format = *f.format;
  cfg.validate();
  return cfg;
}

template <class Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ph::UsageError("cannot write " + path);
  write(out);
}

int run_experiment(ph::Experiment e, const Flags& f) {
  const auto cfg = resolve(e, f);
  if (e == ph::Experiment::rates) ph::write_rates_table(cfg, std::cout);
  const auto rep = ph::run(cfg);
  // the rates table already went to stdout; its report needs --out
  if (e != ph::Experiment::rates || !cfg.out_path.empty()) {
    emit(cfg.out_path, [&](std::ostream& o) {
      if (cfg.format == "json")
        o << rep.to_json().dump(2) << '\n';
      else
        rep.write_csv(o);
    });
  }
  std::fprintf(stderr, "%s: %s (%.2f s)\n", ph::to_string(e).c_str(), rep.pass() ? "PASS" : "FAIL", rep.seconds);
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proclab: fBM empirical and quantile process laboratory"};
  app.require_subcommand(1);

  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> cmds;
  for (auto e : ph::all_experiments()) {
    const auto name = ph::to_string(e);
    cmds[name] = app.add_subcommand(name, "run the " + name + " experiment");
    add_common(cmds[name], flags[name]);
  }

  Flags ens_flags;
  auto* fbm_cmd = app.add_subcommand("fbm-sample", "dump an fBM ensemble as CSV");
  add_common(fbm_cmd, ens_flags);

  Flags field_flags;
  auto* field_cmd = app.add_subcommand("field-sample", "dump limit-field samples as CSV");
  add_common(field_cmd, field_flags);
  std::vector<std::string> field_points;
  field_cmd->add_option("--point", field_points, "field point t@x (repeatable)")->required();

  Flags fam_flags;
  double dump_u = 0.3, dump_k = 2.718281828459045;
  auto* fam_cmd = app.add_subcommand("brackets-dump", "dump a small bracket family as CSV");
  add_common(fam_cmd, fam_flags);
  fam_cmd->add_option("--u", dump_u, "bracket width level u");
  fam_cmd->add_option("--k", dump_k, "modulus constant K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto e : ph::all_experiments()) {
      const auto name = ph::to_string(e);
      if (cmds[name]->parsed()) return run_experiment(e, flags[name]);
    }
    if (fbm_cmd->parsed()) {
      auto cfg = resolve(ph::Experiment::cov_check, ens_flags);
      if (!ens_flags.n_paths) cfg.n_paths = 10;
      const auto ens = proclab::fbm::sample(cfg.method, proclab::fbm::HurstIndex(cfg.hurst), cfg.grid.build(),
                                            cfg.n_paths, cfg.seed == 0 ? 1 : cfg.seed, {cfg.threads});
      emit(cfg.out_path, [&](std::ostream& o) { ens.write_csv(o); });
      return 0;
    }
    if (field_cmd->parsed()) {
      auto cfg = resolve(ph::Experiment::limit_sim, field_flags);
      if (!field_flags.n_paths) cfg.n_paths = 100;
      proclab::field::FieldSpec spec;
      spec.hurst = proclab::fbm::HurstIndex(cfg.hurst);
      spec.kappa = cfg.kappa;
      for (const auto& p : field_points) {
        const auto at = p.find('@');
        if (at == std::string::npos) throw ph::UsageError("field point must look like t@x");
        try {
          spec.points.push_back({std::stod(p.substr(0, at)), std::stod(p.substr(at + 1))});
        } catch (const std::exception&) {
          throw ph::UsageError("bad field point '" + p + "'");
        }
      }
      const auto s = proclab::field::sample_field(spec, cfg.n_paths, cfg.seed == 0 ? 1 : cfg.seed, {cfg.threads});
      emit(cfg.out_path, [&](std::ostream& o) { s.write_csv(o); });
      return 0;
    }
    if (fam_cmd->parsed()) {
      auto cfg = resolve(ph::Experiment::brackets, fam_flags);
      proclab::brackets::ModulusParams p;
      p.h = proclab::fbm::HurstIndex(cfg.hurst);
      p.gamma = fam_flags.gamma ? cfg.gamma : 0.3;
      p.u = dump_u;
      p.k_const = dump_k;
      p.t_max = cfg.grid.t_max;
      const auto fam = proclab::brackets::build_brackets(p);
      emit(cfg.out_path, [&](std::ostream& o) { proclab::brackets::write_family_csv(fam, p, o); });
      return 0;
    }
  } catch (const ph::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const proclab::DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const proclab::PreconditionError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

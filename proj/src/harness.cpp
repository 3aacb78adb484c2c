#include "ia/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ia/oracle.hpp"

namespace ia {

std::string to_string(Algo a) {
  switch (a) {
    case Algo::rcrm: return "rcrm";
    case Algo::leakage_min: return "leakage_min";
    case Algo::max_sinr: return "max_sinr";
    case Algo::max_sinr_qr: return "max_sinr_qr";
    case Algo::random_bf_zf: return "random_bf_zf";
  }
  return "rcrm";
}

Algo algo_from_string(const std::string& s) {
  if (s == "rcrm") return Algo::rcrm;
  if (s == "leakage_min") return Algo::leakage_min;
  if (s == "max_sinr") return Algo::max_sinr;
  if (s == "max_sinr_qr") return Algo::max_sinr_qr;
  if (s == "random_bf_zf") return Algo::random_bf_zf;
  throw config_error("unknown algorithm: " + s);
}

void ExperimentSpec::validate() const {
  system.validate();
  if (trials < 1) {
    throw config_error("trials must be >= 1");
  }
  if (algorithms.empty()) {
    throw config_error("at least one algorithm must be selected");
  }
  for (Algo a : algorithms) {
    const auto it = iteration_budgets.find(a);
    if (it != iteration_budgets.end() && it->second < 1) {
      throw config_error("iteration budget for " + to_string(a) + " must be >= 1");
    }
    if (a == Algo::random_bf_zf && system.kind != ChannelKind::cellular) {
      throw config_error("random_bf_zf requires a cellular system");
    }
  }
  if (format != "csv" && format != "json") {
    throw config_error("format must be csv or json");
  }
}

namespace {

struct AlgRun {
  bool failed = false;
  std::vector<double> rates;  // one per power point
  std::vector<double> dims;   // one per power point
};

int budget_for(const ExperimentSpec& spec, Algo a) {
  const auto it = spec.iteration_budgets.find(a);
  if (it != spec.iteration_budgets.end()) return it->second;
  return a == Algo::rcrm ? 5 : 2000;
}

double mean_user_dims(const ChannelSet& ch, const FilterSet& ortho, double tau) {
  const LinkMatrices links = build_links(ch, ortho);
  double total = 0.0;
  for (std::size_t k = 0; k < links.S.size(); ++k) {
    total += per_user_dof(links.S[k], links.J[k], tau);
  }
  return total / static_cast<double>(links.S.size());
}

std::vector<double> rates_over_grid(const ChannelSet& ch, const FilterSet& unit_filters,
                                    const SystemConfig& cfg) {
  std::vector<double> rates;
  rates.reserve(cfg.power_grid_db.size());
  for (double P : cfg.power_grid_db) {
    const FilterSet powered = apply_power(unit_filters, P, cfg.d);
    rates.push_back(sum_rate(build_links(ch, powered), cfg.noise_var));
  }
  return rates;
}

ChannelSet generate_trial_channels(const SystemConfig& cfg, std::uint64_t master,
                                   std::uint64_t trial) {
  std::mt19937_64 rng(mix_seed(mix_seed(master, trial), 0));
  switch (cfg.kind) {
    case ChannelKind::generic:
      return gen_iid_channels(cfg, rng);
    case ChannelKind::diagonal_extension:
      return gen_symbol_extension_channels(cfg, cfg.extension_slots, rng);
    case ChannelKind::cellular:
      return gen_cellular_channels(CellularConfig::from(cfg), rng);
  }
  throw config_error("unknown channel kind");
}

// One Monte-Carlo realization: all selected algorithms on a shared channel
// set. RNG streams: stream 1 seeds the shared initial filters (and rcrm's
// zero-forcer init, which replays the same draws); stream 2 + algo ordinal
// seeds algorithm-private randomness.
std::vector<AlgRun> run_trial(const ExperimentSpec& spec, const ChannelSet& ch,
                              std::uint64_t trial) {
  const SystemConfig& cfg = spec.system;
  const std::uint64_t trial_seed = mix_seed(spec.master_seed, trial);
  const std::size_t n_p = cfg.power_grid_db.size();

  std::mt19937_64 filter_rng(mix_seed(trial_seed, 1));
  const FilterSet f0 = init_filters(cfg, filter_rng);

  std::vector<AlgRun> outs(spec.algorithms.size());
  for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
    const Algo algo = spec.algorithms[ai];
    AlgRun& out = outs[ai];
    try {
      switch (algo) {
        case Algo::rcrm: {
          std::mt19937_64 rng(mix_seed(trial_seed, 1));  // shares f0's U draws
          RcrmOptions opts;
          opts.solver = spec.solver;
          opts.rank_tau = cfg.dim_threshold;
          const AlgoTrace trace =
              rcrm_alternating(ch, cfg, budget_for(spec, algo), rng, opts);
          out.rates = rates_over_grid(ch, trace.filters, cfg);
          out.dims.assign(n_p, mean_user_dims(ch, trace.filters, cfg.dim_threshold));
          break;
        }
        case Algo::leakage_min: {
          const AlgoTrace trace = leakage_min(ch, f0, budget_for(spec, algo), cfg.dim_threshold);
          out.rates = rates_over_grid(ch, trace.filters, cfg);
          out.dims.assign(n_p, mean_user_dims(ch, trace.filters, cfg.dim_threshold));
          break;
        }
        case Algo::max_sinr:
        case Algo::max_sinr_qr: {
          out.rates.reserve(n_p);
          out.dims.reserve(n_p);
          for (double P : cfg.power_grid_db) {
            const AlgoTrace trace =
                algo == Algo::max_sinr
                    ? max_sinr(ch, f0, budget_for(spec, algo), P, cfg.noise_var, cfg.dim_threshold)
                    : max_sinr_qr(ch, f0, budget_for(spec, algo), P, cfg.noise_var,
                                  cfg.dim_threshold);
            const FilterSet powered = apply_power(trace.filters, P, cfg.d);
            out.rates.push_back(sum_rate(build_links(ch, powered), cfg.noise_var));
            const FilterSet counted = trace.filters.orthonormal
                                          ? trace.filters
                                          : orthonormalize_filters(trace.filters);
            out.dims.push_back(mean_user_dims(ch, counted, cfg.dim_threshold));
          }
          break;
        }
        case Algo::random_bf_zf: {
          std::mt19937_64 rng(mix_seed(trial_seed, 2 + static_cast<std::uint64_t>(algo)));
          const FilterSet f = random_bf_zf_cellular(ch, CellularConfig::from(cfg), rng);
          out.rates = rates_over_grid(ch, f, cfg);
          out.dims.assign(n_p, mean_user_dims(ch, f, cfg.dim_threshold));
          break;
        }
      }
    } catch (const solver_abort_error&) {
      out.failed = true;
    } catch (const degenerate_input_error&) {
      out.failed = true;
    } catch (const numerical_error&) {
      out.failed = true;
    }
  }
  return outs;
}

std::vector<ResultRow> aggregate(const ExperimentSpec& spec,
                                 const std::vector<std::vector<AlgRun>>& per_trial) {
  std::vector<ResultRow> rows;
  const std::size_t n_p = spec.system.power_grid_db.size();
  for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
    for (std::size_t pi = 0; pi < n_p; ++pi) {
      ResultRow row;
      row.algorithm = to_string(spec.algorithms[ai]);
      row.P_db = spec.system.power_grid_db[pi];
      std::vector<double> rates, dims;
      for (const auto& trial : per_trial) {
        if (trial[ai].failed) continue;
        rates.push_back(trial[ai].rates[pi]);
        dims.push_back(trial[ai].dims[pi]);
      }
      row.trials = static_cast<int>(rates.size());
      row.failures = static_cast<int>(per_trial.size() - rates.size());
      if (!rates.empty()) {
        double sum = 0.0;
        for (double r : rates) sum += r;
        row.mean_sum_rate = sum / rates.size();
        double var = 0.0;
        for (double r : rates) var += (r - row.mean_sum_rate) * (r - row.mean_sum_rate);
        row.std_sum_rate = rates.size() > 1 ? std::sqrt(var / (rates.size() - 1)) : 0.0;
        double dsum = 0.0;
        for (double v : dims) dsum += v;
        row.mean_user_dims = dsum / dims.size();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_experiment_on_channels(const ExperimentSpec& spec,
                                                  const std::vector<ChannelSet>& channels) {
  spec.validate();
  const int trials = static_cast<int>(channels.size());
  std::vector<std::vector<AlgRun>> per_trial(channels.size());
  if (spec.workers == 1) {
    for (int t = 0; t < trials; ++t) {
      per_trial[t] = run_trial(spec, channels[t], static_cast<std::uint64_t>(t));
    }
  } else {
    const int threads = spec.workers > 0 ? spec.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int t = 0; t < trials; ++t) {
      per_trial[t] = run_trial(spec, channels[t], static_cast<std::uint64_t>(t));
    }
  }
  ExperimentSpec effective = spec;
  effective.trials = trials;
  return aggregate(effective, per_trial);
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ChannelSet> channels;
  if (!spec.load_channels_path.empty()) {
    std::ifstream in(spec.load_channels_path);
    if (!in) {
      throw io_error("cannot open channel dump: " + spec.load_channels_path);
    }
    nlohmann::json j;
    in >> j;
    for (const auto& cj : j.at("channel_sets")) {
      channels.push_back(channels_from_json(cj));
    }
  } else {
    channels.reserve(static_cast<std::size_t>(spec.trials));
    for (int t = 0; t < spec.trials; ++t) {
      channels.push_back(
          generate_trial_channels(spec.system, spec.master_seed, static_cast<std::uint64_t>(t)));
    }
  }
  if (!spec.dump_channels_path.empty()) {
    nlohmann::json j;
    j["schema"] = 1;
    j["master_seed"] = spec.master_seed;
    nlohmann::json sets = nlohmann::json::array();
    for (const ChannelSet& ch : channels) {
      sets.push_back(channels_to_json(ch));
    }
    j["channel_sets"] = std::move(sets);
    std::ofstream out(spec.dump_channels_path);
    if (!out) {
      throw io_error("cannot write channel dump: " + spec.dump_channels_path);
    }
    out << j.dump() << "\n";
  }
  return run_experiment_on_channels(spec, channels);
}

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  if (rows.empty()) {
    throw contract_error("results_to_csv: no rows");
  }
  std::ostringstream out;
  out << "algorithm,P_db,mean_sum_rate,std_sum_rate,mean_user_dims,trials,failures\n";
  for (const ResultRow& r : rows) {
    out << r.algorithm << ',' << fmt12(r.P_db) << ',' << fmt12(r.mean_sum_rate) << ','
        << fmt12(r.std_sum_rate) << ',' << fmt12(r.mean_user_dims) << ',' << r.trials << ','
        << r.failures << '\n';
  }
  return out.str();
}

nlohmann::json results_to_json_doc(const std::vector<ResultRow>& rows) {
  if (rows.empty()) {
    throw contract_error("results_to_json_doc: no rows");
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    nlohmann::json jr;
    jr["algorithm"] = r.algorithm;
    jr["P_db"] = std::stod(fmt12(r.P_db));
    jr["mean_sum_rate"] = std::stod(fmt12(r.mean_sum_rate));
    jr["std_sum_rate"] = std::stod(fmt12(r.std_sum_rate));
    jr["mean_user_dims"] = std::stod(fmt12(r.mean_user_dims));
    jr["trials"] = r.trials;
    jr["failures"] = r.failures;
    arr.push_back(std::move(jr));
  }
  return arr;
}

void emit_results(const std::vector<ResultRow>& rows, const std::string& format,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw io_error("cannot write results file: " + path);
  }
  if (format == "csv") {
    out << results_to_csv(rows);
  } else if (format == "json") {
    out << results_to_json_doc(rows).dump(2) << "\n";
  } else {
    throw config_error("format must be csv or json");
  }
}

namespace {

struct IniFile {
  // section -> key -> value; top-level keys live in section "".
  std::map<std::string, std::map<std::string, std::string>> values;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

IniFile parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file: " + path);
  }
  IniFile ini;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw config_error(path + ":" + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
    }
    ini.values[section][key] = value;
  }
  return ini;
}

std::vector<double> parse_power_grid(const std::string& s) {
  std::vector<double> grid;
  if (s.find(':') != std::string::npos) {
    double start, step, stop;
    char c1, c2;
    std::istringstream is(s);
    if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':') {
      throw config_error("power_db range must be start:step:stop");
    }
    if (step <= 0 || stop < start) {
      throw config_error("power_db range must be increasing");
    }
    for (double p = start; p <= stop + 1e-9; p += step) grid.push_back(p);
  } else {
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      grid.push_back(std::stod(trim(tok)));
    }
  }
  if (grid.empty()) {
    throw config_error("power_db must not be empty");
  }
  return grid;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw config_error("expected boolean, got: " + s);
}

template <typename T, typename F>
void take(std::map<std::string, std::string>& sec, const std::string& key, T& out, F&& conv) {
  const auto it = sec.find(key);
  if (it == sec.end()) return;
  out = conv(it->second);
  sec.erase(it);
}

void expect_empty(const std::map<std::string, std::string>& sec, const std::string& name) {
  if (!sec.empty()) {
    throw config_error("unknown key '" + sec.begin()->first + "' in section [" + name + "]");
  }
}

}  // namespace

ExperimentSpec load_experiment_file(const std::string& path) {
  IniFile ini = parse_ini(path);
  ExperimentSpec spec;

  auto top = ini.values[""];
  std::string schema;
  take(top, "schema", schema, [](const std::string& v) { return v; });
  if (schema != "1") {
    throw config_error("config file must declare 'schema = 1'");
  }
  expect_empty(top, "");

  auto sys = ini.values["system"];
  take(sys, "K", spec.system.K, [](const std::string& v) { return std::stoi(v); });
  take(sys, "M_t", spec.system.M_t, [](const std::string& v) { return std::stoi(v); });
  take(sys, "M_r", spec.system.M_r, [](const std::string& v) { return std::stoi(v); });
  take(sys, "d", spec.system.d, [](const std::string& v) { return std::stoi(v); });
  take(sys, "kind", spec.system.kind,
       [](const std::string& v) { return channel_kind_from_string(v); });
  take(sys, "power_db", spec.system.power_grid_db, parse_power_grid);
  take(sys, "noise_var", spec.system.noise_var, [](const std::string& v) { return std::stod(v); });
  take(sys, "eps", spec.system.eps, [](const std::string& v) { return std::stod(v); });
  take(sys, "dim_threshold", spec.system.dim_threshold,
       [](const std::string& v) { return std::stod(v); });
  take(sys, "extension_slots", spec.system.extension_slots,
       [](const std::string& v) { return std::stoi(v); });
  take(sys, "complex_gaussian", spec.system.complex_gaussian, parse_bool);
  expect_empty(sys, "system");

  auto exp = ini.values["experiment"];
  take(exp, "algorithms", spec.algorithms, [](const std::string& v) {
    std::vector<Algo> algos;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      algos.push_back(algo_from_string(trim(tok)));
    }
    return algos;
  });
  take(exp, "trials", spec.trials, [](const std::string& v) { return std::stoi(v); });
  take(exp, "rcrm_rounds", spec.iteration_budgets[Algo::rcrm],
       [](const std::string& v) { return std::stoi(v); });
  take(exp, "leakage_min_iters", spec.iteration_budgets[Algo::leakage_min],
       [](const std::string& v) { return std::stoi(v); });
  take(exp, "max_sinr_iters", spec.iteration_budgets[Algo::max_sinr],
       [](const std::string& v) { return std::stoi(v); });
  take(exp, "max_sinr_qr_iters", spec.iteration_budgets[Algo::max_sinr_qr],
       [](const std::string& v) { return std::stoi(v); });
  take(exp, "seed", spec.master_seed, [](const std::string& v) { return std::stoull(v); });
  take(exp, "workers", spec.workers, [](const std::string& v) { return std::stoi(v); });
  take(exp, "out", spec.output_path, [](const std::string& v) { return v; });
  take(exp, "format", spec.format, [](const std::string& v) { return v; });
  expect_empty(exp, "experiment");

  auto sol = ini.values["solver"];
  take(sol, "rho", spec.solver.rho, [](const std::string& v) { return std::stod(v); });
  take(sol, "over_relax", spec.solver.over_relax,
       [](const std::string& v) { return std::stod(v); });
  take(sol, "primal_tol", spec.solver.primal_tol,
       [](const std::string& v) { return std::stod(v); });
  take(sol, "obj_tol", spec.solver.obj_tol, [](const std::string& v) { return std::stod(v); });
  take(sol, "max_iter", spec.solver.max_iter, [](const std::string& v) { return std::stoi(v); });
  take(sol, "adaptive_rho", spec.solver.adaptive_rho, parse_bool);
  expect_empty(sol, "solver");

  for (const auto& [name, _] : ini.values) {
    if (name != "" && name != "system" && name != "experiment" && name != "solver") {
      throw config_error("unknown section [" + name + "]");
    }
  }

  spec.system.seed = spec.master_seed;
  return spec;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Precoder/zero-forcer design toolkit for the K-user MIMO interference channel"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a Monte-Carlo experiment from a config file");
  std::string config_path, out_override, format_override, dump_path, load_path;
  std::int64_t seed_override = -1;
  int trials_override = -1, workers_override = -1;
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed_override, "override master seed");
  run->add_option("--out", out_override, "override output path");
  run->add_option("--format", format_override, "override output format (csv|json)");
  run->add_option("--trials", trials_override, "override trial count");
  run->add_option("--workers", workers_override, "override worker count (1 = serial)");
  run->add_option("--dump-channels", dump_path, "write per-trial channels to a JSON file");
  run->add_option("--load-channels", load_path, "replay channels from a JSON dump");

  auto* validate = app.add_subcommand("validate", "Check a config and report properness");
  std::string validate_path;
  validate->add_option("--config", validate_path, "experiment config file")->required();

  auto* oracle = app.add_subcommand("oracle", "Cross-check the solver against the sphere-grid oracle");
  std::uint64_t oracle_seed = 0;
  int oracle_instances = 10;
  int oracle_directions = 10000;
  double oracle_eps = 0.1;
  oracle->add_option("--seed", oracle_seed, "master seed for the tiny instances");
  oracle->add_option("--instances", oracle_instances, "number of random instances");
  oracle->add_option("--directions", oracle_directions, "grid directions per vector");
  oracle->add_option("--eps", oracle_eps, "signal-floor constraint value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) {
      ExperimentSpec spec = load_experiment_file(config_path);
      if (seed_override >= 0) {
        spec.master_seed = static_cast<std::uint64_t>(seed_override);
        spec.system.seed = spec.master_seed;
      }
      if (!out_override.empty()) spec.output_path = out_override;
      if (!format_override.empty()) spec.format = format_override;
      if (trials_override > 0) spec.trials = trials_override;
      if (workers_override >= 0) spec.workers = workers_override;
      if (!dump_path.empty()) spec.dump_channels_path = dump_path;
      if (!load_path.empty()) spec.load_channels_path = load_path;
      spec.validate();
      const std::vector<ResultRow> rows = run_experiment(spec);
      emit_results(rows, spec.format, spec.output_path);
      std::cout << "wrote " << rows.size() << " rows to " << spec.output_path << "\n";
      return 0;
    }
    if (*validate) {
      const ExperimentSpec spec = load_experiment_file(validate_path);
      spec.validate();
      const int slack = properness_slack(spec.system);
      std::cout << "kind=" << to_string(spec.system.kind)
                << " proper=" << (is_proper(spec.system) ? "true" : "false")
                << " slack=" << slack << "\n";
      return 0;
    }
    if (*oracle) {
      SystemConfig cfg;
      cfg.K = 2;
      cfg.M_t = 2;
      cfg.M_r = 2;
      cfg.d = 1;
      cfg.eps = oracle_eps;
      std::printf("%-8s %-16s %-16s %-10s\n", "instance", "solver_obj", "oracle_obj", "status");
      for (int i = 0; i < oracle_instances; ++i) {
        std::mt19937_64 ch_rng(mix_seed(mix_seed(oracle_seed, i), 0));
        std::mt19937_64 u_rng(mix_seed(mix_seed(oracle_seed, i), 1));
        const ChannelSet ch = gen_iid_channels(cfg, ch_rng);
        const std::vector<cx_mat> U = init_zeroforcers(cfg, u_rng);
        const SolveResult res = solve_precoders(ch, U, cfg);
        const double oracle_obj = precoder_sphere_oracle(ch, U, cfg.eps, oracle_directions);
        std::printf("%-8d %-16.9g %-16.9g %-10s\n", i, res.report.objective, oracle_obj,
                    to_string(res.report.status).c_str());
      }
      return 0;
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace ia

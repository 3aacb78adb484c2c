#pragma once

#include <map>
#include <string>
#include <vector>

#include "ia/algorithms.hpp"
#include "ia/model.hpp"

namespace ia {

enum class Algo { rcrm, leakage_min, max_sinr, max_sinr_qr, random_bf_zf };

std::string to_string(Algo a);
Algo algo_from_string(const std::string& s);

/// Monte-Carlo experiment description: one system, a set of algorithms run on
/// identical per-trial channels, a power sweep, and aggregation settings.
struct ExperimentSpec {
  SystemConfig system;
  std::vector<Algo> algorithms = {Algo::rcrm};
  int trials = 20;
  std::map<Algo, int> iteration_budgets = {
      {Algo::rcrm, 5},
      {Algo::leakage_min, 2000},
      {Algo::max_sinr, 2000},
      {Algo::max_sinr_qr, 2000},
  };
  std::string output_path = "results.csv";
  std::string format = "csv";  // csv | json
  std::uint64_t master_seed = 0;
  int workers = 0;  // 0: all OpenMP threads; 1: serial reference path
  std::string dump_channels_path;
  std::string load_channels_path;
  SolverOptions solver;

  void validate() const;
};

/// One aggregated line per (algorithm, power point). `trials` counts the
/// realizations that contributed; failed realizations are excluded from the
/// means and reported in `failures`.
struct ResultRow {
  std::string algorithm;
  double P_db = 0.0;
  double mean_sum_rate = 0.0;
  double std_sum_rate = 0.0;
  double mean_user_dims = 0.0;
  int trials = 0;
  int failures = 0;
};

/// Runs the experiment: per trial, derive seeds from the master seed,
/// generate (or replay) one channel set, run every selected algorithm on it,
/// evaluate sum rate over the power grid and interference-free dimensions on
/// orthonormalized filters. Deterministic given master_seed, independent of
/// the worker count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Same, on caller-provided channel sets (one per trial); used by the
/// --load-channels replay path and by tests with constructed channels.
std::vector<ResultRow> run_experiment_on_channels(const ExperimentSpec& spec,
                                                  const std::vector<ChannelSet>& channels);

std::string results_to_csv(const std::vector<ResultRow>& rows);
nlohmann::json results_to_json_doc(const std::vector<ResultRow>& rows);
void emit_results(const std::vector<ResultRow>& rows, const std::string& format,
                  const std::string& path);

/// Flat key = value configuration file with [system], [experiment] and
/// optional [solver] sections; `schema = 1` is required. See README for the
/// full key list.
ExperimentSpec load_experiment_file(const std::string& path);

/// `run` / `validate` / `oracle` subcommands. Returns 0 on success, 1 on
/// configuration errors, 2 on runtime failures.
int cli_main(int argc, const char* const* argv);

}  // namespace ia

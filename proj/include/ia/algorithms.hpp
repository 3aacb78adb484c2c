#pragma once

#include <vector>

#include "ia/cvxsolve.hpp"
#include "ia/ia_core.hpp"
#include "ia/model.hpp"

namespace ia {

/// A subproblem came back infeasible mid-run; carries the 1-based round index
/// and the solver report.
class solver_abort_error : public std::runtime_error {
 public:
  solver_abort_error(const std::string& what, int round, SolveReport report)
      : std::runtime_error(what), round(round), report(report) {}
  int round;
  SolveReport report;
};

/// One per-iteration snapshot. `sum_nuclear` is the alternating objective
/// sum_k ||J_k||_* at the iteration's raw filters; `leakage` is the unit-power
/// trace-form leakage; ranks are counted at `rank_tau` on orthonormalized
/// copies where the algorithm does not already keep orthonormal filters
/// (max-SINR records use its raw unit-norm columns).
struct IterationRecord {
  double sum_nuclear = 0.0;
  double leakage = 0.0;
  std::vector<int> rank_S;
  std::vector<int> rank_J;
  double sum_rate = 0.0;
};

struct AlgoTrace {
  std::vector<IterationRecord> records;  // one per iteration
  FilterSet filters;                     // final filters
  FilterSet filters_raw;                 // final filters before any output orthonormalization
  int iterations_run = 0;
  std::vector<SolveReport> solver_reports;  // rcrm only: per half-step
};

/// Haar-like orthonormal initialization: Gaussian matrices orthonormalized
/// by QR, one M_r x d zero-forcer per user. Complex Gaussian entries when
/// cfg.complex_gaussian, real otherwise (matching the channel field).
std::vector<cx_mat> init_zeroforcers(const SystemConfig& cfg, std::mt19937_64& rng);

/// Full random orthonormal filter set for the baseline algorithms. Draws all
/// zero-forcers first (identical stream to init_zeroforcers), then precoders.
FilterSet init_filters(const SystemConfig& cfg, std::mt19937_64& rng);

struct RcrmOptions {
  SolverOptions solver;
  double rank_tau = 1e-6;
  bool orthonormalize_each_round = false;  // alternative pseudocode reading
};

/// The alternating nuclear-norm heuristic: n rounds of (precoder solve,
/// zero-forcer solve) starting from random zero-forcers, each subproblem warm
/// started from the previous round, orthonormalization once after the loop.
/// Cellular channel sets use the block-constrained precoder solve.
/// Throws solver_abort_error when a subproblem is infeasible.
AlgoTrace rcrm_alternating(const ChannelSet& ch, const SystemConfig& cfg, int n,
                           std::mt19937_64& rng, const RcrmOptions& opts = {});

/// Alternating interference-leakage minimization: each half-step replaces one
/// filter side by the eigenvectors of the d smallest eigenvalues of its
/// interference covariance (reciprocal channels H[k][l]^H for the precoder
/// side). Leakage is non-increasing across iterations.
AlgoTrace leakage_min(const ChannelSet& ch, const FilterSet& f0, int iters,
                      double rank_tau = 1e-6);

/// Alternating per-stream max-SINR filter updates in the forward and
/// reciprocal directions. Columns are unit-norm but not mutually orthogonal.
AlgoTrace max_sinr(const ChannelSet& ch, const FilterSet& f0, int iters,
                   double P_db, double noise_var, double rank_tau = 1e-6);

/// max_sinr followed by orthonormalization of the final filters.
AlgoTrace max_sinr_qr(const ChannelSet& ch, const FilterSet& f0, int iters,
                      double P_db, double noise_var, double rank_tau = 1e-6);

/// Cellular baseline: every user draws a uniform unit-sphere beamforming
/// vector; each receiver zero-forces with the eigenvectors of the d smallest
/// eigenvalues of its interference covariance.
FilterSet random_bf_zf_cellular(const ChannelSet& ch, const CellularConfig& cfg,
                                std::mt19937_64& rng);

}  // namespace ia

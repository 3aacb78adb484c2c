#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "ia/model.hpp"
#include "ia/numerics.hpp"

namespace ia {

/// Real embedding of a complex matrix: X -> [[Re X, -Im X], [Im X, Re X]].
/// Singular values and eigenvalues appear twice, so the embedded nuclear
/// norm is exactly twice the complex one and PSD-ness is preserved.
arma::mat embed_complex(const cx_mat& m);
cx_mat unembed_complex(const arma::mat& e);

/// One matrix-valued affine function of the packed real variable vector x:
/// vec(embedded output) = coeff * x + offset (column-major vec).
struct AffineTerm {
  arma::uword cx_rows = 0;  // complex output shape; embedded shape is 2x
  arma::uword cx_cols = 0;
  arma::mat coeff;
  arma::vec offset;
};

struct VariableShape {
  arma::uword rows = 0;
  arma::uword cols = 0;
};

/// Entries of a matrix variable pinned to zero: rows `rows` of column `col`.
struct ZeroPattern {
  int var = 0;
  std::vector<int> rows;
  int col = 0;
};

/// minimize   sum_i ||nuclear_terms[i](x)||_*
/// subject to lmi_terms[j](x) = lmi_terms[j](x)^H  >=  eps * I   for all j
/// with zero-pattern entries excluded from x by construction.
struct NuclearLmiProblem {
  std::vector<VariableShape> vars;
  std::vector<ZeroPattern> zero_patterns;
  arma::uword n = 0;  // packed real degrees of freedom
  std::vector<AffineTerm> nuclear_terms;
  std::vector<AffineTerm> lmi_terms;
  double eps = 0.1;
  bool hermitian_lmi = true;
};

enum class SolveStatus { optimal, max_iter, infeasible };

std::string to_string(SolveStatus s);

struct SolveReport {
  double objective = 0.0;           // sum of complex nuclear norms at the solution
  double primal_feasibility = 0.0;  // max constraint violation of the solution
  int iterations = 0;
  SolveStatus status = SolveStatus::optimal;
  double split_residual = 0.0;      // final consensus residual (diagnostic)
};

/// ADMM (over-relaxed operator splitting) parameters. The defaults are the
/// library-wide stopping rules; they are deliberately tighter than every
/// downstream tolerance.
struct SolverOptions {
  double rho = 0.0;           // penalty; <= 0 picks 5/eps (SVT threshold eps/5)
  double over_relax = 1.5;
  double primal_tol = 1e-6;   // max per-block Frobenius consensus violation
  double obj_tol = 1e-7;      // relative objective change
  int max_iter = 50000;
  bool adaptive_rho = true;
  double infeasible_floor = 1e-3;  // end-of-run violation above this => infeasible
};

struct SolveResult {
  std::vector<cx_mat> vars;  // empty when status == infeasible
  SolveReport report;
};

/// Packs complex matrix variables (skipping zero-pattern entries) into the
/// real vector the solver works on, and back. Exposed for tests and the
/// problem dump.
arma::vec pack_variables(const NuclearLmiProblem& p, const std::vector<cx_mat>& vars);
std::vector<cx_mat> unpack_variables(const NuclearLmiProblem& p, const arma::vec& x);

/// Assembles a NuclearLmiProblem by probing linear evaluators on basis
/// perturbations of the variables. Evaluators must be real-linear maps
/// (complex-linear or conjugate-linear both qualify).
class ProblemBuilder {
 public:
  using Evaluator = std::function<cx_mat(const std::vector<cx_mat>&)>;

  int add_variable(arma::uword rows, arma::uword cols);
  void pin_zero_rows(int var, int col, std::vector<int> rows);
  void add_nuclear_term(Evaluator f);
  void add_lmi_term(Evaluator f);
  NuclearLmiProblem build(double eps, bool hermitian_lmi = true) const;

 private:
  std::vector<VariableShape> vars_;
  std::vector<ZeroPattern> zeros_;
  std::vector<Evaluator> nuclear_;
  std::vector<Evaluator> lmi_;
};

/// Core solver: Douglas-Rachford/ADMM consensus splitting with over-relaxation.
/// Singular-value thresholding is the proximal step for the nuclear terms,
/// eigenvalue clamping the projection for the LMI terms, and the affine
/// consensus step is a prefactored least-squares projection restricted to the
/// Hermitian-feasible parameterization.
SolveResult solve_nuclear_lmi(const NuclearLmiProblem& p, const SolverOptions& opts,
                              const std::vector<cx_mat>* warm_start = nullptr);

/// Subproblem A_V: free precoders, fixed zero-forcers.
SolveResult solve_precoders(const ChannelSet& ch, const std::vector<cx_mat>& U_fixed,
                            const SystemConfig& cfg, const SolverOptions& opts = {},
                            const std::vector<cx_mat>* warm_start = nullptr);

/// Subproblem A_U: free zero-forcers, fixed precoders. Decouples per receiver
/// and is solved as K independent programs.
SolveResult solve_zeroforcers(const ChannelSet& ch, const std::vector<cx_mat>& V_fixed,
                              const SystemConfig& cfg, const SolverOptions& opts = {},
                              const std::vector<cx_mat>* warm_start = nullptr);

/// Cellular A_V: per-user block structure imposed through zero patterns, so
/// constrained entries are exactly zero by construction.
SolveResult solve_precoders_cellular(const ChannelSet& ch, const std::vector<cx_mat>& U_fixed,
                                     const CellularConfig& cfg, const SolverOptions& opts = {},
                                     const std::vector<cx_mat>* warm_start = nullptr);

/// Offline cross-checking dump: variable shapes, zero patterns, and affine
/// map coefficients as flat arrays.
nlohmann::json problem_to_json(const NuclearLmiProblem& p);

}  // namespace ia

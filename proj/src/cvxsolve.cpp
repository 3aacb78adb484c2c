#include "ia/cvxsolve.hpp"

#include <algorithm>
#include <cmath>

namespace ia {

arma::mat embed_complex(const cx_mat& m) {
  if (m.n_rows == 0 || m.n_cols == 0) {
    return arma::mat(2 * m.n_rows, 2 * m.n_cols);
  }
  const arma::mat re = arma::real(m);
  const arma::mat im = arma::imag(m);
  arma::mat e(2 * m.n_rows, 2 * m.n_cols);
  e.submat(0, 0, m.n_rows - 1, m.n_cols - 1) = re;
  e.submat(0, m.n_cols, m.n_rows - 1, 2 * m.n_cols - 1) = -im;
  e.submat(m.n_rows, 0, 2 * m.n_rows - 1, m.n_cols - 1) = im;
  e.submat(m.n_rows, m.n_cols, 2 * m.n_rows - 1, 2 * m.n_cols - 1) = re;
  return e;
}

cx_mat unembed_complex(const arma::mat& e) {
  const arma::uword r = e.n_rows / 2;
  const arma::uword c = e.n_cols / 2;
  const arma::mat re = (e.submat(0, 0, r - 1, c - 1) + e.submat(r, c, 2 * r - 1, 2 * c - 1)) / 2.0;
  const arma::mat im = (e.submat(r, 0, 2 * r - 1, c - 1) - e.submat(0, c, r - 1, 2 * c - 1)) / 2.0;
  return cx_mat(re, im);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "optimal";
}

namespace {

// Per-variable mask of entries pinned to zero.
std::vector<arma::umat> zero_masks(const NuclearLmiProblem& p) {
  std::vector<arma::umat> masks;
  masks.reserve(p.vars.size());
  for (const VariableShape& v : p.vars) {
    masks.emplace_back(v.rows, v.cols, arma::fill::zeros);
  }
  for (const ZeroPattern& z : p.zero_patterns) {
    for (int r : z.rows) {
      masks[static_cast<std::size_t>(z.var)](static_cast<arma::uword>(r),
                                             static_cast<arma::uword>(z.col)) = 1;
    }
  }
  return masks;
}

arma::uword count_dof(const std::vector<arma::umat>& masks) {
  arma::uword n = 0;
  for (const arma::umat& m : masks) {
    n += 2 * (m.n_elem - arma::accu(m));
  }
  return n;
}

}  // namespace

arma::vec pack_variables(const NuclearLmiProblem& p, const std::vector<cx_mat>& vars) {
  if (vars.size() != p.vars.size()) {
    throw contract_error("pack_variables: variable count mismatch");
  }
  const auto masks = zero_masks(p);
  arma::vec x(p.n, arma::fill::zeros);
  arma::uword idx = 0;
  for (std::size_t l = 0; l < vars.size(); ++l) {
    if (vars[l].n_rows != p.vars[l].rows || vars[l].n_cols != p.vars[l].cols) {
      throw contract_error("pack_variables: variable shape mismatch");
    }
    for (arma::uword j = 0; j < vars[l].n_cols; ++j) {
      for (arma::uword i = 0; i < vars[l].n_rows; ++i) {
        if (masks[l](i, j)) continue;
        x(idx++) = vars[l](i, j).real();
        x(idx++) = vars[l](i, j).imag();
      }
    }
  }
  return x;
}

std::vector<cx_mat> unpack_variables(const NuclearLmiProblem& p, const arma::vec& x) {
  const auto masks = zero_masks(p);
  std::vector<cx_mat> vars;
  vars.reserve(p.vars.size());
  arma::uword idx = 0;
  for (std::size_t l = 0; l < p.vars.size(); ++l) {
    cx_mat m(p.vars[l].rows, p.vars[l].cols, arma::fill::zeros);
    for (arma::uword j = 0; j < m.n_cols; ++j) {
      for (arma::uword i = 0; i < m.n_rows; ++i) {
        if (masks[l](i, j)) continue;
        m(i, j) = {x(idx), x(idx + 1)};
        idx += 2;
      }
    }
    vars.push_back(std::move(m));
  }
  return vars;
}

int ProblemBuilder::add_variable(arma::uword rows, arma::uword cols) {
  vars_.push_back({rows, cols});
  return static_cast<int>(vars_.size()) - 1;
}

void ProblemBuilder::pin_zero_rows(int var, int col, std::vector<int> rows) {
  zeros_.push_back({var, std::move(rows), col});
}

void ProblemBuilder::add_nuclear_term(Evaluator f) { nuclear_.push_back(std::move(f)); }

void ProblemBuilder::add_lmi_term(Evaluator f) { lmi_.push_back(std::move(f)); }

NuclearLmiProblem ProblemBuilder::build(double eps, bool hermitian_lmi) const {
  if (eps <= 0.0) {
    throw contract_error("ProblemBuilder: eps must be positive");
  }
  NuclearLmiProblem p;
  p.vars = vars_;
  p.zero_patterns = zeros_;
  p.eps = eps;
  p.hermitian_lmi = hermitian_lmi;
  const auto masks = zero_masks(p);
  p.n = count_dof(masks);

  std::vector<cx_mat> zeros;
  zeros.reserve(vars_.size());
  for (const VariableShape& v : vars_) {
    zeros.emplace_back(v.rows, v.cols, arma::fill::zeros);
  }

  auto probe = [&](const std::vector<Evaluator>& evals) {
    std::vector<AffineTerm> terms;
    terms.reserve(evals.size());
    for (const Evaluator& f : evals) {
      const cx_mat at_zero = f(zeros);
      AffineTerm t;
      t.cx_rows = at_zero.n_rows;
      t.cx_cols = at_zero.n_cols;
      t.offset = arma::vectorise(embed_complex(at_zero));
      t.coeff.set_size(t.offset.n_elem, p.n);
      terms.push_back(std::move(t));
    }
    // One basis perturbation per real degree of freedom.
    std::vector<cx_mat> basis = zeros;
    arma::uword dof = 0;
    for (std::size_t l = 0; l < vars_.size(); ++l) {
      for (arma::uword j = 0; j < vars_[l].cols; ++j) {
        for (arma::uword i = 0; i < vars_[l].rows; ++i) {
          if (masks[l](i, j)) continue;
          for (int part = 0; part < 2; ++part) {
            basis[l](i, j) = part == 0 ? arma::cx_double(1, 0) : arma::cx_double(0, 1);
            for (std::size_t t = 0; t < evals.size(); ++t) {
              terms[t].coeff.col(dof) =
                  arma::vectorise(embed_complex(evals[t](basis))) - terms[t].offset;
            }
            basis[l](i, j) = 0;
            ++dof;
          }
        }
      }
    }
    return terms;
  };

  p.nuclear_terms = probe(nuclear_);
  p.lmi_terms = probe(lmi_);
  // Zero-width interference blocks (K = 1) carry no objective.
  std::erase_if(p.nuclear_terms, [](const AffineTerm& t) { return t.cx_cols == 0 || t.cx_rows == 0; });
  return p;
}

namespace {

struct Block {
  arma::uword start = 0;
  arma::uword rows = 0;  // embedded
  arma::uword cols = 0;
  bool nuclear = false;
};

// Rows of the affine equality system expressing symmetry of every embedded
// LMI output (the Hermitian constraint on the complex side).
void hermitian_rows(const AffineTerm& t, arma::mat& E, arma::vec& rhs) {
  const arma::uword dim = 2 * t.cx_rows;
  std::vector<arma::uword> ridx;
  for (arma::uword q = 0; q < dim; ++q) {
    for (arma::uword p_ = 0; p_ < q; ++p_) {
      ridx.push_back(p_ + q * dim);  // (p, q) column-major
    }
  }
  const arma::uword base = E.n_rows;
  E.resize(base + ridx.size(), t.coeff.n_cols);
  rhs.resize(base + ridx.size());
  arma::uword out = base;
  for (arma::uword q = 0; q < dim; ++q) {
    for (arma::uword p_ = 0; p_ < q; ++p_) {
      const arma::uword ij = p_ + q * dim;
      const arma::uword ji = q + p_ * dim;
      E.row(out) = t.coeff.row(ij) - t.coeff.row(ji);
      rhs(out) = t.offset(ji) - t.offset(ij);
      ++out;
    }
  }
}

}  // namespace

SolveResult solve_nuclear_lmi(const NuclearLmiProblem& p, const SolverOptions& opts,
                              const std::vector<cx_mat>* warm_start) {
  SolveResult result;
  if (p.n == 0) {
    throw contract_error("solve_nuclear_lmi: problem has no free variables");
  }

  // Stack all term maps into one tall system vec(blocks) = B x + c.
  std::vector<Block> blocks;
  arma::uword m = 0;
  for (const AffineTerm& t : p.nuclear_terms) {
    blocks.push_back({m, 2 * t.cx_rows, 2 * t.cx_cols, true});
    m += t.coeff.n_rows;
  }
  for (const AffineTerm& t : p.lmi_terms) {
    blocks.push_back({m, 2 * t.cx_rows, 2 * t.cx_cols, false});
    m += t.coeff.n_rows;
  }
  arma::mat B(m, p.n);
  arma::vec c(m);
  {
    arma::uword row = 0;
    for (const AffineTerm& t : p.nuclear_terms) {
      B.rows(row, row + t.coeff.n_rows - 1) = t.coeff;
      c.subvec(row, row + t.coeff.n_rows - 1) = t.offset;
      row += t.coeff.n_rows;
    }
    for (const AffineTerm& t : p.lmi_terms) {
      B.rows(row, row + t.coeff.n_rows - 1) = t.coeff;
      c.subvec(row, row + t.coeff.n_rows - 1) = t.offset;
      row += t.coeff.n_rows;
    }
  }

  // Hermitian feasibility is an affine equality on x; restrict the search to
  // that subspace via an orthonormal nullspace parameterization x = x0 + N z.
  arma::vec x0(p.n, arma::fill::zeros);
  arma::mat N;
  bool reduced = false;
  if (p.hermitian_lmi && !p.lmi_terms.empty()) {
    arma::mat E(0, p.n);
    arma::vec rhs;
    for (const AffineTerm& t : p.lmi_terms) {
      hermitian_rows(t, E, rhs);
    }
    if (E.n_rows > 0) {
      N = arma::null(E);
      if (arma::norm(rhs) > 0.0) {
        x0 = arma::pinv(E) * rhs;  // min-norm particular solution
        if (arma::norm(E * x0 - rhs) > 1e-8 * std::max(1.0, arma::norm(rhs))) {
          result.report.status = SolveStatus::infeasible;
          return result;
        }
      }
      if (N.n_cols == p.n) {
        // Equality rows were all trivially satisfied; skip the reduction.
        N.reset();
      } else {
        reduced = true;
      }
    }
  }

  if (reduced && N.n_cols == 0) {
    throw contract_error("solve_nuclear_lmi: equality constraints leave no free variables");
  }

  // Structurally dead LMI terms (constant maps below the eps floor, e.g. a
  // zero direct channel) can never be satisfied.
  for (const AffineTerm& t : p.lmi_terms) {
    if (arma::norm(t.coeff, "fro") == 0.0) {
      arma::mat M(2 * t.cx_rows, 2 * t.cx_cols);
      for (arma::uword j = 0; j < M.n_cols; ++j) {
        M.col(j) = t.offset.subvec(j * M.n_rows, (j + 1) * M.n_rows - 1);
      }
      if (arma::eig_sym((M + M.t()) / 2.0).min() < p.eps) {
        result.report.status = SolveStatus::infeasible;
        return result;
      }
    }
  }

  const arma::mat Bt = reduced ? arma::mat(B * N) : B;
  const arma::vec ct = reduced ? arma::vec(B * x0 + c) : c;

  arma::mat Ub, Vb;
  arma::vec sb;
  if (!arma::svd_econ(Ub, sb, Vb, Bt)) {
    throw numerical_error("solve_nuclear_lmi: stacked map SVD failed", Bt.n_rows, Bt.n_cols);
  }
  const double smax = sb.empty() ? 0.0 : sb.max();
  const arma::uword rank_b =
      smax > 0 ? arma::uword(arma::sum(sb > 1e-10 * smax)) : 0;
  const arma::mat Ur = Ub.head_cols(rank_b);
  const arma::vec sr = sb.head(rank_b);
  const arma::mat Vr = Vb.head_cols(rank_b);

  double rho = opts.rho > 0.0 ? opts.rho : 5.0 / p.eps;
  const double alpha = opts.over_relax;

  // Warm start: seed the splits at the affine image of the packed filters.
  arma::vec w(m);
  if (warm_start != nullptr) {
    const arma::vec xw = pack_variables(p, *warm_start);
    const arma::vec zw = reduced ? arma::vec(N.t() * (xw - x0)) : arma::vec(xw - x0);
    w = Bt * zw + ct;
  } else {
    w = ct;  // image of z = 0
  }
  arma::vec u(m, arma::fill::zeros);
  arma::vec y_last(rank_b, arma::fill::zeros);

  double obj_prev = std::numeric_limits<double>::infinity();
  double obj_now = 0.0;
  double r_norm = std::numeric_limits<double>::infinity();
  int iter = 0;
  SolveStatus status = SolveStatus::max_iter;

  arma::vec az(m), h(m), v(m), w_new(m);
  for (iter = 1; iter <= opts.max_iter; ++iter) {
    // Affine consensus step (min-norm least squares via the prefactored SVD).
    const arma::vec target = w - u - ct;
    y_last = Ur.t() * target;
    az = Ur * y_last + ct;

    h = alpha * az + (1.0 - alpha) * w;
    v = h + u;

    // Proximal step per block: SVT for nuclear terms, eigenvalue clamping
    // at eps for LMI terms.
    double obj_split = 0.0;
    for (const Block& blk : blocks) {
      arma::mat M(blk.rows, blk.cols);
      for (arma::uword j = 0; j < blk.cols; ++j) {
        M.col(j) = v.subvec(blk.start + j * blk.rows, blk.start + (j + 1) * blk.rows - 1);
      }
      arma::mat W;
      if (blk.nuclear) {
        arma::mat Us, Vs;
        arma::vec ss;
        if (!arma::svd_econ(Us, ss, Vs, M)) {
          throw numerical_error("solve_nuclear_lmi: SVT SVD failed", M.n_rows, M.n_cols);
        }
        arma::vec thr = ss - 1.0 / rho;
        thr.transform([](double x) { return x > 0.0 ? x : 0.0; });
        obj_split += arma::sum(thr);
        W = Us * arma::diagmat(thr) * Vs.t();
      } else {
        const arma::mat sym = (M + M.t()) / 2.0;
        arma::vec ev;
        arma::mat evec;
        if (!arma::eig_sym(ev, evec, sym)) {
          throw numerical_error("solve_nuclear_lmi: projection eig failed", sym.n_rows, sym.n_cols);
        }
        ev.transform([&](double x) { return x < p.eps ? p.eps : x; });
        W = evec * arma::diagmat(ev) * evec.t();
      }
      for (arma::uword j = 0; j < blk.cols; ++j) {
        w_new.subvec(blk.start + j * blk.rows, blk.start + (j + 1) * blk.rows - 1) = W.col(j);
      }
    }
    obj_now = obj_split / 2.0;  // embedded nuclear norm is twice the complex one

    u += h - w_new;

    // Residuals: primal consensus violation (max per-block Frobenius norm)
    // and the dual residual for penalty balancing.
    r_norm = 0.0;
    for (const Block& blk : blocks) {
      double acc = 0.0;
      for (arma::uword i = blk.start; i < blk.start + blk.rows * blk.cols; ++i) {
        const double dlt = az(i) - w_new(i);
        acc += dlt * dlt;
      }
      r_norm = std::max(r_norm, std::sqrt(acc));
    }

    const bool obj_settled = std::abs(obj_now - obj_prev) <= opts.obj_tol * std::max(1.0, std::abs(obj_now));
    if (iter > 2 && r_norm <= opts.primal_tol && obj_settled) {
      status = SolveStatus::optimal;
      w = w_new;
      break;
    }

    if (opts.adaptive_rho && iter % 100 == 0 && iter <= 10000) {
      const arma::vec dw = w_new - w;
      const double s_norm = rho * arma::norm(sr % (Ur.t() * dw));
      if (r_norm > 10.0 * s_norm && s_norm > 0.0) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s_norm > 10.0 * r_norm && r_norm > 0.0) {
        rho /= 2.0;
        u *= 2.0;
      }
    }

    w = w_new;
    obj_prev = obj_now;
  }
  if (iter > opts.max_iter) iter = opts.max_iter;

  result.report.iterations = iter;
  result.report.split_residual = r_norm;
  result.report.status = status;

  // Recover the solution from the last consensus step.
  arma::vec z = Vr * (y_last / sr);
  arma::vec x = reduced ? arma::vec(x0 + N * z) : z;
  result.vars = unpack_variables(p, x);

  // Report in solution units: objective re-evaluated at x, feasibility as the
  // worst eps-violation of the LMI terms.
  double obj = 0.0;
  for (const AffineTerm& t : p.nuclear_terms) {
    arma::vec vec_out = t.coeff * x + t.offset;
    arma::mat M(2 * t.cx_rows, 2 * t.cx_cols);
    for (arma::uword j = 0; j < M.n_cols; ++j) {
      M.col(j) = vec_out.subvec(j * M.n_rows, (j + 1) * M.n_rows - 1);
    }
    obj += arma::sum(arma::svd(M)) / 2.0;
  }
  double viol = 0.0;
  for (const AffineTerm& t : p.lmi_terms) {
    arma::vec vec_out = t.coeff * x + t.offset;
    arma::mat M(2 * t.cx_rows, 2 * t.cx_cols);
    for (arma::uword j = 0; j < M.n_cols; ++j) {
      M.col(j) = vec_out.subvec(j * M.n_rows, (j + 1) * M.n_rows - 1);
    }
    const arma::mat sym = (M + M.t()) / 2.0;
    viol = std::max(viol, std::max(0.0, p.eps - arma::eig_sym(sym).min()));
    viol = std::max(viol, arma::norm(M - M.t(), "fro"));
  }
  result.report.objective = obj;
  result.report.primal_feasibility = viol;
  if (status == SolveStatus::max_iter && viol > opts.infeasible_floor) {
    // Could not certify a feasible point even at the iteration cap.
    result.report.status = SolveStatus::infeasible;
    result.vars.clear();
  }
  return result;
}

namespace {

void require_full_column_rank(const std::vector<cx_mat>& mats, const char* what) {
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const arma::vec s = svd(mats[k]).singular_values;
    if (s.n_elem < mats[k].n_cols || s.back() <= kRankFloor * std::max(s.front(), 1e-300)) {
      throw degenerate_input_error(std::string(what) + ": rank-deficient matrix for user " +
                                       std::to_string(k),
                                   static_cast<int>(k));
    }
  }
}

NuclearLmiProblem build_precoder_problem(const ChannelSet& ch, const std::vector<cx_mat>& U_fixed,
                                         double eps, const CellularConfig* cellular) {
  const int K = ch.K;
  const arma::uword d = U_fixed[0].n_cols;
  // G[k][l] = U_k^H H[k][l]; J_k and S_k are then linear in the V variables.
  std::vector<cx_mat> G(static_cast<std::size_t>(K) * K);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < K; ++l) {
      G[static_cast<std::size_t>(k) * K + l] = U_fixed[k].t() * ch.at(k, l);
    }
  }
  ProblemBuilder builder;
  for (int l = 0; l < K; ++l) {
    const int var = builder.add_variable(ch.M_t, d);
    if (cellular != nullptr) {
      const int block = cellular->per_user_antennas();
      for (int u = 0; u < cellular->users_per_cell(); ++u) {
        std::vector<int> zero_rows;
        for (int r = 0; r < ch.M_t; ++r) {
          if (r < u * block || r >= (u + 1) * block) zero_rows.push_back(r);
        }
        builder.pin_zero_rows(var, u, std::move(zero_rows));
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    builder.add_nuclear_term([K, k, d, &G](const std::vector<cx_mat>& V) {
      cx_mat J(d, static_cast<arma::uword>(K - 1) * d);
      arma::uword col = 0;
      for (int l = 0; l < K; ++l) {
        if (l == k) continue;
        J.cols(col, col + d - 1) = G[static_cast<std::size_t>(k) * K + l] * V[l];
        col += d;
      }
      return J;
    });
    builder.add_lmi_term([K, k, &G](const std::vector<cx_mat>& V) {
      return cx_mat(G[static_cast<std::size_t>(k) * K + k] * V[k]);
    });
  }
  return builder.build(eps);
}

}  // namespace

SolveResult solve_precoders(const ChannelSet& ch, const std::vector<cx_mat>& U_fixed,
                            const SystemConfig& cfg, const SolverOptions& opts,
                            const std::vector<cx_mat>* warm_start) {
  cfg.validate();
  require_full_column_rank(U_fixed, "solve_precoders");
  const NuclearLmiProblem p = build_precoder_problem(ch, U_fixed, cfg.eps, nullptr);
  return solve_nuclear_lmi(p, opts, warm_start);
}

SolveResult solve_precoders_cellular(const ChannelSet& ch, const std::vector<cx_mat>& U_fixed,
                                     const CellularConfig& cfg, const SolverOptions& opts,
                                     const std::vector<cx_mat>* warm_start) {
  require_full_column_rank(U_fixed, "solve_precoders_cellular");
  const NuclearLmiProblem p = build_precoder_problem(ch, U_fixed, cfg.base.eps, &cfg);
  return solve_nuclear_lmi(p, opts, warm_start);
}

SolveResult solve_zeroforcers(const ChannelSet& ch, const std::vector<cx_mat>& V_fixed,
                              const SystemConfig& cfg, const SolverOptions& opts,
                              const std::vector<cx_mat>* warm_start) {
  cfg.validate();
  require_full_column_rank(V_fixed, "solve_zeroforcers");
  const int K = ch.K;
  const arma::uword d = V_fixed[0].n_cols;

  // Each receiver's terms depend only on its own U_k: K independent programs.
  SolveResult total;
  total.report.status = SolveStatus::optimal;
  std::vector<cx_mat> Us(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    cx_mat W(ch.M_r, static_cast<arma::uword>(K - 1) * d);
    arma::uword col = 0;
    for (int l = 0; l < K; ++l) {
      if (l == k) continue;
      W.cols(col, col + d - 1) = ch.at(k, l) * V_fixed[l];
      col += d;
    }
    const cx_mat direct = ch.at(k, k) * V_fixed[k];

    ProblemBuilder builder;
    builder.add_variable(ch.M_r, d);
    builder.add_nuclear_term([&W](const std::vector<cx_mat>& U) { return cx_mat(U[0].t() * W); });
    builder.add_lmi_term([&direct](const std::vector<cx_mat>& U) { return cx_mat(U[0].t() * direct); });
    const NuclearLmiProblem p = builder.build(cfg.eps);

    std::vector<cx_mat> warm_k;
    const std::vector<cx_mat>* warm_ptr = nullptr;
    if (warm_start != nullptr) {
      warm_k.push_back((*warm_start)[static_cast<std::size_t>(k)]);
      warm_ptr = &warm_k;
    }
    SolveResult rk = solve_nuclear_lmi(p, opts, warm_ptr);
    total.report.objective += rk.report.objective;
    total.report.primal_feasibility =
        std::max(total.report.primal_feasibility, rk.report.primal_feasibility);
    total.report.iterations = std::max(total.report.iterations, rk.report.iterations);
    total.report.split_residual = std::max(total.report.split_residual, rk.report.split_residual);
    if (rk.report.status == SolveStatus::infeasible) {
      total.report.status = SolveStatus::infeasible;
      total.vars.clear();
      return total;
    }
    if (rk.report.status == SolveStatus::max_iter) {
      total.report.status = SolveStatus::max_iter;
    }
    Us[static_cast<std::size_t>(k)] = std::move(rk.vars[0]);
  }
  total.vars = std::move(Us);
  return total;
}

nlohmann::json problem_to_json(const NuclearLmiProblem& p) {
  nlohmann::json j;
  j["n_free"] = p.n;
  j["eps"] = p.eps;
  j["hermitian_lmi"] = p.hermitian_lmi;
  nlohmann::json vars = nlohmann::json::array();
  for (const VariableShape& v : p.vars) {
    vars.push_back({{"rows", v.rows}, {"cols", v.cols}});
  }
  j["vars"] = std::move(vars);
  nlohmann::json zeros = nlohmann::json::array();
  for (const ZeroPattern& z : p.zero_patterns) {
    zeros.push_back({{"var", z.var}, {"rows", z.rows}, {"col", z.col}});
  }
  j["zero_patterns"] = std::move(zeros);
  auto dump_terms = [](const std::vector<AffineTerm>& terms) {
    nlohmann::json arr = nlohmann::json::array();
    for (const AffineTerm& t : terms) {
      nlohmann::json jt;
      jt["cx_rows"] = t.cx_rows;
      jt["cx_cols"] = t.cx_cols;
      jt["coeff"] = std::vector<double>(t.coeff.begin(), t.coeff.end());  // column-major
      jt["offset"] = std::vector<double>(t.offset.begin(), t.offset.end());
      arr.push_back(std::move(jt));
    }
    return arr;
  };
  j["nuclear_terms"] = dump_terms(p.nuclear_terms);
  j["lmi_terms"] = dump_terms(p.lmi_terms);
  return j;
}

}  // namespace ia

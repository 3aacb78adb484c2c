#include "ia/algorithms.hpp"

#include <cmath>

namespace ia {

namespace {

cx_mat draw_gaussian(int rows, int cols, bool complex_entries, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  cx_mat m(rows, cols);
  if (complex_entries) {
    const double scale = 1.0 / std::sqrt(2.0);
    for (arma::uword j = 0; j < m.n_cols; ++j) {
      for (arma::uword i = 0; i < m.n_rows; ++i) {
        m(i, j) = {gauss(rng) * scale, gauss(rng) * scale};
      }
    }
  } else {
    for (arma::uword j = 0; j < m.n_cols; ++j) {
      for (arma::uword i = 0; i < m.n_rows; ++i) {
        m(i, j) = {gauss(rng), 0.0};
      }
    }
  }
  return m;
}

void require_orthonormal(const FilterSet& f, const char* who) {
  for (const cx_mat& v : f.V) {
    if (arma::norm(cx_mat(v.t() * v) - arma::eye<cx_mat>(v.n_cols, v.n_cols), "fro") > 1e-6) {
      throw contract_error(std::string(who) + ": initial filters must be orthonormal");
    }
  }
  for (const cx_mat& u : f.U) {
    if (arma::norm(cx_mat(u.t() * u) - arma::eye<cx_mat>(u.n_cols, u.n_cols), "fro") > 1e-6) {
      throw contract_error(std::string(who) + ": initial filters must be orthonormal");
    }
  }
}

// Columns paired with the d smallest eigenvalues of a Hermitian PSD matrix.
cx_mat smallest_eigvecs(const cx_mat& Q, int d) {
  const HermEigResult e = herm_eig(Q);
  return e.eigenvectors.tail_cols(d);
}

IterationRecord snapshot(const ChannelSet& ch, const FilterSet& raw, double rank_tau,
                         bool ranks_on_orthonormalized, double rate_P_db, double noise_var) {
  IterationRecord rec;
  const LinkMatrices raw_links = build_links(ch, raw);
  for (std::size_t k = 0; k < raw_links.J.size(); ++k) {
    rec.sum_nuclear += nuclear_norm(raw_links.J[k]);
  }
  FilterSet counted = raw;
  if (ranks_on_orthonormalized) {
    counted = orthonormalize_filters(raw);
  }
  const LinkMatrices links =
      ranks_on_orthonormalized ? build_links(ch, counted) : raw_links;
  for (std::size_t k = 0; k < links.S.size(); ++k) {
    rec.rank_S.push_back(static_cast<int>(rank_tol(links.S[k], rank_tau)));
    rec.rank_J.push_back(static_cast<int>(rank_tol(links.J[k], rank_tau)));
  }
  rec.leakage = leakage(ch, counted, 1.0, static_cast<int>(counted.V[0].n_cols));
  const FilterSet powered =
      apply_power(counted, rate_P_db, static_cast<int>(counted.V[0].n_cols));
  rec.sum_rate = sum_rate(build_links(ch, powered), noise_var);
  return rec;
}

}  // namespace

std::vector<cx_mat> init_zeroforcers(const SystemConfig& cfg, std::mt19937_64& rng) {
  std::vector<cx_mat> U;
  U.reserve(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    U.push_back(qr_orthonormalize(draw_gaussian(cfg.M_r, cfg.d, cfg.complex_gaussian, rng)));
  }
  return U;
}

FilterSet init_filters(const SystemConfig& cfg, std::mt19937_64& rng) {
  FilterSet f;
  f.U = init_zeroforcers(cfg, rng);
  f.V.reserve(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    f.V.push_back(qr_orthonormalize(draw_gaussian(cfg.M_t, cfg.d, cfg.complex_gaussian, rng)));
  }
  f.orthonormal = true;
  return f;
}

AlgoTrace rcrm_alternating(const ChannelSet& ch, const SystemConfig& cfg, int n,
                           std::mt19937_64& rng, const RcrmOptions& opts) {
  cfg.validate();
  if (n < 1) {
    throw contract_error("rcrm_alternating: n must be positive");
  }
  const bool cellular = ch.kind == ChannelKind::cellular;
  CellularConfig cell_cfg;
  if (cellular) {
    cell_cfg = CellularConfig::from(cfg);
  }

  std::vector<cx_mat> U = init_zeroforcers(cfg, rng);
  std::vector<cx_mat> V;
  AlgoTrace trace;
  for (int round = 1; round <= n; ++round) {
    const std::vector<cx_mat>* warm_v = V.empty() ? nullptr : &V;
    SolveResult rv = cellular
                         ? solve_precoders_cellular(ch, U, cell_cfg, opts.solver, warm_v)
                         : solve_precoders(ch, U, cfg, opts.solver, warm_v);
    trace.solver_reports.push_back(rv.report);
    if (rv.report.status == SolveStatus::infeasible) {
      throw solver_abort_error("rcrm_alternating: precoder subproblem infeasible at round " +
                                   std::to_string(round),
                               round, rv.report);
    }
    V = std::move(rv.vars);

    SolveResult ru = solve_zeroforcers(ch, V, cfg, opts.solver, &U);
    trace.solver_reports.push_back(ru.report);
    if (ru.report.status == SolveStatus::infeasible) {
      throw solver_abort_error("rcrm_alternating: zero-forcer subproblem infeasible at round " +
                                   std::to_string(round),
                               round, ru.report);
    }
    U = std::move(ru.vars);

    FilterSet current;
    current.V = V;
    current.U = U;
    trace.records.push_back(snapshot(ch, current, opts.rank_tau,
                                     /*ranks_on_orthonormalized=*/true,
                                     /*rate_P_db=*/0.0, cfg.noise_var));
    if (opts.orthonormalize_each_round && round < n) {
      const FilterSet ortho = orthonormalize_filters(current);
      V = ortho.V;
      U = ortho.U;
    }
  }
  trace.iterations_run = n;

  trace.filters_raw.V = std::move(V);
  trace.filters_raw.U = std::move(U);
  trace.filters = orthonormalize_filters(trace.filters_raw);
  return trace;
}

AlgoTrace leakage_min(const ChannelSet& ch, const FilterSet& f0, int iters, double rank_tau) {
  if (iters < 1) {
    throw contract_error("leakage_min: iters must be positive");
  }
  require_orthonormal(f0, "leakage_min");
  const int K = ch.K;
  const int d = static_cast<int>(f0.V[0].n_cols);
  std::vector<cx_mat> V = f0.V;
  std::vector<cx_mat> U = f0.U;

  AlgoTrace trace;
  trace.records.reserve(static_cast<std::size_t>(iters));
  for (int it = 0; it < iters; ++it) {
    // Forward half-step: zero-forcers from the interference covariance.
    for (int k = 0; k < K; ++k) {
      U[static_cast<std::size_t>(k)] = smallest_eigvecs(interference_covariance(ch, V, k), d);
    }
    // Reverse half-step on the reciprocal network H[k][l]^H with roles swapped.
    for (int l = 0; l < K; ++l) {
      cx_mat Q(ch.M_t, ch.M_t, arma::fill::zeros);
      for (int k = 0; k < K; ++k) {
        if (k == l) continue;
        const cx_mat HU = ch.at(k, l).t() * U[static_cast<std::size_t>(k)];
        Q += HU * HU.t();
      }
      V[static_cast<std::size_t>(l)] = smallest_eigvecs(Q, d);
    }
    FilterSet current;
    current.V = V;
    current.U = U;
    current.orthonormal = true;
    trace.records.push_back(snapshot(ch, current, rank_tau,
                                     /*ranks_on_orthonormalized=*/false,
                                     /*rate_P_db=*/0.0, 1.0));
  }
  trace.iterations_run = iters;
  trace.filters.V = std::move(V);
  trace.filters.U = std::move(U);
  trace.filters.orthonormal = true;
  trace.filters_raw = trace.filters;
  return trace;
}

AlgoTrace max_sinr(const ChannelSet& ch, const FilterSet& f0, int iters, double P_db,
                   double noise_var, double rank_tau) {
  if (iters < 1) {
    throw contract_error("max_sinr: iters must be positive");
  }
  require_orthonormal(f0, "max_sinr");
  const int K = ch.K;
  const int d = static_cast<int>(f0.V[0].n_cols);
  const double p = std::pow(10.0, P_db / 10.0) / static_cast<double>(d);
  std::vector<cx_mat> V = f0.V;
  std::vector<cx_mat> U = f0.U;

  AlgoTrace trace;
  trace.records.reserve(static_cast<std::size_t>(iters));
  for (int it = 0; it < iters; ++it) {
    // Forward: per-stream MMSE-style direction, interference-plus-noise
    // covariance excludes the stream's own contribution.
    for (int k = 0; k < K; ++k) {
      cx_mat B_all(ch.M_r, ch.M_r, arma::fill::zeros);
      for (int l = 0; l < K; ++l) {
        const cx_mat HV = ch.at(k, l) * V[static_cast<std::size_t>(l)];
        B_all += p * (HV * HV.t());
      }
      cx_mat Uk(ch.M_r, d);
      for (int m = 0; m < d; ++m) {
        const cx_vec hv = ch.at(k, k) * V[static_cast<std::size_t>(k)].col(m);
        cx_mat B = B_all - p * (hv * hv.t()) +
                   noise_var * arma::eye<cx_mat>(ch.M_r, ch.M_r);
        cx_vec u = arma::solve(B, hv);
        Uk.col(m) = u / arma::norm(u);
      }
      U[static_cast<std::size_t>(k)] = std::move(Uk);
    }
    // Reverse direction: reciprocal channels, filters swap roles.
    for (int l = 0; l < K; ++l) {
      cx_mat B_all(ch.M_t, ch.M_t, arma::fill::zeros);
      for (int k = 0; k < K; ++k) {
        const cx_mat HU = ch.at(k, l).t() * U[static_cast<std::size_t>(k)];
        B_all += p * (HU * HU.t());
      }
      cx_mat Vl(ch.M_t, d);
      for (int m = 0; m < d; ++m) {
        const cx_vec hu = ch.at(l, l).t() * U[static_cast<std::size_t>(l)].col(m);
        cx_mat B = B_all - p * (hu * hu.t()) +
                   noise_var * arma::eye<cx_mat>(ch.M_t, ch.M_t);
        cx_vec v = arma::solve(B, hu);
        Vl.col(m) = v / arma::norm(v);
      }
      V[static_cast<std::size_t>(l)] = std::move(Vl);
    }
    FilterSet current;
    current.V = V;
    current.U = U;
    IterationRecord rec;
    {
      const LinkMatrices links = build_links(ch, current);
      for (std::size_t k = 0; k < links.J.size(); ++k) {
        rec.sum_nuclear += nuclear_norm(links.J[k]);
        rec.rank_S.push_back(static_cast<int>(rank_tol(links.S[k], rank_tau)));
        rec.rank_J.push_back(static_cast<int>(rank_tol(links.J[k], rank_tau)));
      }
      rec.leakage = leakage(ch, current, 1.0, d);
      const FilterSet powered = apply_power(current, P_db, d);
      rec.sum_rate = sum_rate(build_links(ch, powered), noise_var);
    }
    trace.records.push_back(std::move(rec));
  }
  trace.iterations_run = iters;
  trace.filters.V = std::move(V);
  trace.filters.U = std::move(U);
  trace.filters.orthonormal = (d == 1);
  trace.filters_raw = trace.filters;
  return trace;
}

AlgoTrace max_sinr_qr(const ChannelSet& ch, const FilterSet& f0, int iters, double P_db,
                      double noise_var, double rank_tau) {
  AlgoTrace trace = max_sinr(ch, f0, iters, P_db, noise_var, rank_tau);
  trace.filters_raw = trace.filters;
  trace.filters = orthonormalize_filters(trace.filters_raw);
  return trace;
}

FilterSet random_bf_zf_cellular(const ChannelSet& ch, const CellularConfig& cfg,
                                std::mt19937_64& rng) {
  if (ch.kind != ChannelKind::cellular) {
    throw contract_error("random_bf_zf_cellular: cellular channels required");
  }
  const SystemConfig& base = cfg.base;
  const int block = cfg.per_user_antennas();
  FilterSet f;
  f.V.reserve(base.K);
  f.U.reserve(base.K);
  for (int k = 0; k < base.K; ++k) {
    cx_mat Vk(base.M_t, base.d, arma::fill::zeros);
    for (int u = 0; u < cfg.users_per_cell(); ++u) {
      cx_vec v = draw_gaussian(block, 1, base.complex_gaussian, rng);
      Vk.submat(static_cast<arma::uword>(u) * block, static_cast<arma::uword>(u),
                static_cast<arma::uword>(u + 1) * block - 1, static_cast<arma::uword>(u)) =
          v / arma::norm(v);
    }
    f.V.push_back(std::move(Vk));
  }
  for (int k = 0; k < base.K; ++k) {
    f.U.push_back(smallest_eigvecs(interference_covariance(ch, f.V, k), base.d));
  }
  f.orthonormal = true;
  return f;
}

}  // namespace ia

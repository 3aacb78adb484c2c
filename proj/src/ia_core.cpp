#include "ia/ia_core.hpp"

#include <cmath>

namespace ia {

namespace {

void check_shapes(const ChannelSet& ch, const FilterSet& f) {
  const std::size_t K = static_cast<std::size_t>(ch.K);
  if (f.V.size() != K || f.U.size() != K) {
    throw contract_error("filter set size does not match user count");
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (f.V[k].n_rows != static_cast<arma::uword>(ch.M_t) ||
        f.U[k].n_rows != static_cast<arma::uword>(ch.M_r) ||
        f.V[k].n_cols != f.U[k].n_cols) {
      throw contract_error("filter dimensions do not match channel dimensions");
    }
  }
}

double log2_det_hermitian_pd(const cx_mat& m) {
  cx_mat chol;
  if (!arma::chol(chol, m)) {
    // Fall back on the eigenvalue route for borderline-conditioned inputs.
    const arma::vec ev = herm_eig(m).eigenvalues;
    double acc = 0.0;
    for (double v : ev) acc += std::log2(std::max(v, 1e-300));
    return acc;
  }
  double acc = 0.0;
  for (arma::uword i = 0; i < chol.n_rows; ++i) {
    acc += std::log2(std::abs(chol(i, i).real()));
  }
  return 2.0 * acc;
}

}  // namespace

LinkMatrices build_links(const ChannelSet& ch, const FilterSet& f) {
  check_shapes(ch, f);
  const int K = ch.K;
  LinkMatrices links;
  links.S.reserve(K);
  links.J.reserve(K);
  for (int k = 0; k < K; ++k) {
    const arma::uword d = f.V[k].n_cols;
    links.S.push_back(f.U[k].t() * ch.at(k, k) * f.V[k]);
    cx_mat J(d, static_cast<arma::uword>(K - 1) * d);
    arma::uword col = 0;
    for (int l = 0; l < K; ++l) {
      if (l == k) continue;
      J.cols(col, col + d - 1) = f.U[k].t() * ch.at(k, l) * f.V[l];
      col += d;
    }
    links.J.push_back(std::move(J));
  }
  return links;
}

int per_user_dof(const cx_mat& S_k, const cx_mat& J_k, double tau) {
  const int r_s = static_cast<int>(rank_tol(S_k, tau));
  const int r_j = static_cast<int>(rank_tol(J_k, tau));
  return std::max(0, r_s - r_j);
}

double sum_rate(const LinkMatrices& links, double noise_var) {
  if (links.S.size() != links.J.size()) {
    throw contract_error("sum_rate: S/J list size mismatch");
  }
  const double inv_sigma = 1.0 / std::sqrt(noise_var);
  double rate = 0.0;
  for (std::size_t k = 0; k < links.S.size(); ++k) {
    const cx_mat S = links.S[k] * inv_sigma;
    const arma::uword d = S.n_rows;
    const cx_mat eye = arma::eye<cx_mat>(d, d);
    cx_mat A = eye;
    if (links.J[k].n_cols > 0) {
      const cx_mat J = links.J[k] * inv_sigma;
      A += J * J.t();
    }
    // det(I + A^-1 S S^H) = det(A + S S^H) / det(A), both Hermitian PD.
    rate += 0.5 * (log2_det_hermitian_pd(A + S * S.t()) - log2_det_hermitian_pd(A));
  }
  return rate;
}

cx_mat interference_covariance(const ChannelSet& ch, const std::vector<cx_mat>& V, int k) {
  cx_mat Q(ch.M_r, ch.M_r, arma::fill::zeros);
  for (int l = 0; l < ch.K; ++l) {
    if (l == k) continue;
    const cx_mat HV = ch.at(k, l) * V[l];
    Q += HV * HV.t();
  }
  return Q;
}

double leakage(const ChannelSet& ch, const FilterSet& f, double P_lin, int d) {
  check_shapes(ch, f);
  const double scale = P_lin / static_cast<double>(d);
  double total = 0.0;
  for (int k = 0; k < ch.K; ++k) {
    const cx_mat Q = interference_covariance(ch, f.V, k) * scale;
    total += arma::trace(f.U[k].t() * Q * f.U[k]).real();
  }
  return total;
}

FilterSet apply_power(const FilterSet& f, double P_db, int d) {
  for (const cx_mat& v : f.V) {
    for (arma::uword j = 0; j < v.n_cols; ++j) {
      const double n = arma::norm(v.col(j));
      if (std::abs(n - 1.0) > 1e-6) {
        throw contract_error("apply_power: precoder columns must be unit norm");
      }
    }
  }
  const double col_power = std::pow(10.0, P_db / 10.0) / static_cast<double>(d);
  FilterSet out = f;
  for (cx_mat& v : out.V) {
    v *= std::sqrt(col_power);
  }
  out.power_db = P_db;
  return out;
}

FilterSet orthonormalize_filters(const FilterSet& f) {
  FilterSet out;
  out.V.reserve(f.V.size());
  out.U.reserve(f.U.size());
  for (std::size_t k = 0; k < f.V.size(); ++k) {
    try {
      out.V.push_back(qr_orthonormalize(f.V[k]));
      out.U.push_back(qr_orthonormalize(f.U[k]));
    } catch (const degenerate_input_error&) {
      throw degenerate_input_error(
          "orthonormalize_filters: rank-deficient filter for user " + std::to_string(k),
          static_cast<int>(k));
    }
  }
  out.orthonormal = true;
  return out;
}

FilterSet feasibility_transform(const ChannelSet& ch, const FilterSet& f, FeasibilitySide side) {
  check_shapes(ch, f);
  const LinkMatrices links = build_links(ch, f);
  for (int k = 0; k < ch.K; ++k) {
    const arma::uword d = f.V[k].n_cols;
    const arma::vec s = svd(links.S[k]).singular_values;
    if (s.n_elem < d || s.back() <= kRankFloor * std::max(s.front(), 1e-300)) {
      throw degenerate_input_error(
          "feasibility_transform: S_k must be full rank for user " + std::to_string(k),
          k);
    }
  }
  FilterSet out = f;
  out.orthonormal = false;
  out.power_db.reset();
  for (int k = 0; k < ch.K; ++k) {
    if (side == FeasibilitySide::precoders) {
      out.V[k] = f.V[k] * f.V[k].t() * ch.at(k, k).t() * f.U[k];
    } else {
      out.U[k] = f.U[k] * f.U[k].t() * ch.at(k, k) * f.V[k];
    }
  }
  return out;
}

}  // namespace ia

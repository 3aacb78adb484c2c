#include "ia/numerics.hpp"

namespace ia {

namespace {

void require_finite(const cx_mat& m, const char* op) {
  if (!m.is_finite()) {
    throw contract_error(std::string(op) + ": input has NaN/Inf entries");
  }
}

}  // namespace

SvdResult svd(const cx_mat& m) {
  require_finite(m, "svd");
  SvdResult out;
  if (m.n_rows == 0 || m.n_cols == 0) {
    out.left.set_size(m.n_rows, 0);
    out.singular_values.set_size(0);
    out.right.set_size(m.n_cols, 0);
    return out;
  }
  if (!arma::svd_econ(out.left, out.singular_values, out.right, m)) {
    throw numerical_error("svd: convergence failure", m.n_rows, m.n_cols);
  }
  return out;
}

HermEigResult herm_eig(const cx_mat& m) {
  require_finite(m, "herm_eig");
  if (m.n_rows != m.n_cols) {
    throw contract_error("herm_eig: matrix is not square");
  }
  const double nrm = arma::norm(m, "fro");
  const double skew = arma::norm(m - m.t(), "fro");
  if (skew > 1e-9 * std::max(nrm, 1e-300)) {
    throw contract_error("herm_eig: matrix is not Hermitian within tolerance");
  }
  const cx_mat sym = (m + m.t()) / 2.0;
  arma::vec ev;
  cx_mat evec;
  if (!arma::eig_sym(ev, evec, sym)) {
    throw numerical_error("herm_eig: convergence failure", m.n_rows, m.n_cols);
  }
  // eig_sym returns ascending order; flip to descending.
  HermEigResult out;
  out.eigenvalues = arma::reverse(ev);
  out.eigenvectors = arma::fliplr(evec);
  return out;
}

double min_eig_herm(const cx_mat& m) {
  const HermEigResult e = herm_eig(m);
  return e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
}

cx_mat qr_orthonormalize(const cx_mat& m) {
  require_finite(m, "qr_orthonormalize");
  if (m.n_cols > m.n_rows) {
    throw contract_error("qr_orthonormalize: more columns than rows");
  }
  if (m.n_cols == 0) {
    return m;
  }
  const arma::vec s = svd(m).singular_values;
  if (s.front() <= 0.0 || s.back() <= kRankFloor * s.front()) {
    throw degenerate_input_error("qr_orthonormalize: rank-deficient input");
  }
  cx_mat q, r;
  if (!arma::qr_econ(q, r, m)) {
    throw numerical_error("qr_orthonormalize: QR failed", m.n_rows, m.n_cols);
  }
  return q;
}

arma::uword rank_tol(const cx_mat& m, double tau) {
  if (tau <= 0.0) {
    throw contract_error("rank_tol: tau must be positive");
  }
  if (m.n_rows == 0 || m.n_cols == 0) {
    return 0;
  }
  const arma::vec s = svd(m).singular_values;
  return static_cast<arma::uword>(arma::sum(s > tau));
}

double nuclear_norm(const cx_mat& m) {
  if (m.n_rows == 0 || m.n_cols == 0) {
    return 0.0;
  }
  return arma::sum(svd(m).singular_values);
}

}  // namespace ia

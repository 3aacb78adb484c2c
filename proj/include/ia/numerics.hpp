#pragma once

#include <armadillo>

#include "ia/errors.hpp"

namespace ia {

/// Dense complex matrices are the universal carrier for channels, precoders
/// and zero-forcers. Armadillo's cx_mat (column-major, double precision) is
/// used directly; the functions below add the semantic contracts the rest of
/// the library relies on.
using cx_mat = arma::cx_mat;
using cx_vec = arma::cx_vec;

/// Singular values below kRankFloor * sigma_max are treated as numerical
/// zeros inside the library. The experiment-facing dimension-counting
/// threshold (1e-6) is a separate config value and lives in the harness.
inline constexpr double kRankFloor = 1e-12;

struct SvdResult {
  cx_mat left;                 // orthonormal columns
  arma::vec singular_values;   // descending, nonnegative
  cx_mat right;                // orthonormal columns; M = left*diag(s)*right^H
};

/// Economy SVD. Throws numerical_error on convergence failure,
/// contract_error on non-finite input.
SvdResult svd(const cx_mat& m);

struct HermEigResult {
  arma::vec eigenvalues;  // real, descending
  cx_mat eigenvectors;    // orthonormal columns, paired with eigenvalues
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized
/// internally; inputs farther than 1e-9 (relative) from Hermitian are
/// rejected with contract_error.
HermEigResult herm_eig(const cx_mat& m);

/// Smallest eigenvalue of a Hermitian matrix (same contract as herm_eig).
double min_eig_herm(const cx_mat& m);

/// Orthonormal basis of the column space of m via economy QR. Requires
/// cols <= rows and full column rank (smallest singular value above
/// kRankFloor * largest); throws degenerate_input_error otherwise.
cx_mat qr_orthonormalize(const cx_mat& m);

/// Number of singular values strictly greater than tau (tau > 0).
arma::uword rank_tol(const cx_mat& m, double tau);

/// Sum of singular values.
double nuclear_norm(const cx_mat& m);

}  // namespace ia

#include <doctest.h>

#include <random>

#include "ia/numerics.hpp"

using namespace ia;

namespace {

cx_mat random_cx(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  cx_mat m(rows, cols);
  for (auto& e : m) e = {g(rng), g(rng)};
  return m;
}

double projector_distance(const cx_mat& A, const cx_mat& B) {
  return arma::norm(cx_mat(A * A.t() - B * B.t()), "fro");
}

}  // namespace

TEST_CASE("svd identity and diagonal") {
  const SvdResult r1 = svd(cx_mat(arma::eye<cx_mat>(2, 2)));
  CHECK(r1.singular_values(0) == doctest::Approx(1.0));
  CHECK(r1.singular_values(1) == doctest::Approx(1.0));

  cx_mat d(2, 2, arma::fill::zeros);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  const SvdResult r2 = svd(d);
  CHECK(r2.singular_values(0) == doctest::Approx(4.0));
  CHECK(r2.singular_values(1) == doctest::Approx(3.0));
}

TEST_CASE("svd reconstruction oracle on random 4x8") {
  std::mt19937_64 rng(42);
  const cx_mat m = random_cx(4, 8, rng);
  const SvdResult r = svd(m);
  const cx_mat rebuilt = r.left * arma::diagmat(r.singular_values) * r.right.t();
  CHECK(arma::abs(m - rebuilt).max() <= 1e-10);
  CHECK(arma::norm(cx_mat(r.left.t() * r.left) - arma::eye<cx_mat>(4, 4), "fro") <= 1e-10);
  CHECK(arma::norm(cx_mat(r.right.t() * r.right) - arma::eye<cx_mat>(4, 4), "fro") <= 1e-10);
  // descending order
  for (arma::uword i = 1; i < r.singular_values.n_elem; ++i) {
    CHECK(r.singular_values(i - 1) >= r.singular_values(i));
  }
}

TEST_CASE("svd rejects non-finite input") {
  cx_mat m(2, 2, arma::fill::ones);
  m(0, 0) = {std::nan(""), 0.0};
  CHECK_THROWS_AS(svd(m), contract_error);
}

TEST_CASE("herm_eig identity and diagonal") {
  const HermEigResult r1 = herm_eig(arma::eye<cx_mat>(3, 3));
  for (double ev : r1.eigenvalues) CHECK(ev == doctest::Approx(1.0));

  cx_mat d(2, 2, arma::fill::zeros);
  d(0, 0) = 5.0;
  d(1, 1) = -2.0;
  const HermEigResult r2 = herm_eig(d);
  CHECK(r2.eigenvalues(0) == doctest::Approx(5.0));
  CHECK(r2.eigenvalues(1) == doctest::Approx(-2.0));
}

TEST_CASE("herm_eig cross-checks the SVD on A^H A") {
  std::mt19937_64 rng(7);
  const cx_mat a = random_cx(6, 4, rng);
  const cx_mat m = a.t() * a;
  const HermEigResult r = herm_eig(m);
  const arma::vec s = svd(a).singular_values;
  for (arma::uword i = 0; i < 4; ++i) {
    CHECK(r.eigenvalues(i) >= -1e-12);
    CHECK(r.eigenvalues(i) == doctest::Approx(s(i) * s(i)).epsilon(1e-8));
    const cx_vec resid = m * r.eigenvectors.col(i) - r.eigenvalues(i) * r.eigenvectors.col(i);
    CHECK(arma::norm(resid) <= 1e-9 * arma::norm(m, "fro"));
  }
}

TEST_CASE("herm_eig contract violations") {
  std::mt19937_64 rng(9);
  CHECK_THROWS_AS(herm_eig(random_cx(3, 2, rng)), contract_error);
  cx_mat skewed = random_cx(3, 3, rng);  // generic, far from Hermitian
  CHECK_THROWS_AS(herm_eig(skewed), contract_error);
}

TEST_CASE("qr_orthonormalize basics") {
  std::mt19937_64 rng(11);
  // idempotence on an orthonormal basis (up to column phase)
  const cx_mat q = qr_orthonormalize(random_cx(5, 2, rng));
  const cx_mat q2 = qr_orthonormalize(q);
  CHECK(projector_distance(q, q2) <= 1e-9);

  // single scaled basis column normalizes
  cx_mat m(3, 1, arma::fill::zeros);
  m(0, 0) = 2.0;
  const cx_mat e = qr_orthonormalize(m);
  CHECK(std::abs(std::abs(e(0, 0)) - 1.0) <= 1e-12);
  CHECK(std::abs(e(1, 0)) <= 1e-12);

  // random 8x3: orthonormal and span-preserving
  const cx_mat a = random_cx(8, 3, rng);
  const cx_mat qa = qr_orthonormalize(a);
  CHECK(arma::norm(cx_mat(qa.t() * qa) - arma::eye<cx_mat>(3, 3), "fro") <= 1e-10);
  const cx_mat qb = qr_orthonormalize(a * random_cx(3, 3, rng));  // same span, new basis
  CHECK(projector_distance(qa, qb) <= 1e-9);
}

TEST_CASE("qr_orthonormalize degenerate input") {
  std::mt19937_64 rng(13);
  cx_mat a = random_cx(5, 2, rng);
  a.col(1) = a.col(0) * 2.0;
  CHECK_THROWS_AS(qr_orthonormalize(a), degenerate_input_error);
  CHECK_THROWS_AS(qr_orthonormalize(random_cx(2, 3, rng)), contract_error);
}

TEST_CASE("rank_tol thresholds") {
  CHECK(rank_tol(cx_mat(3, 3, arma::fill::zeros), 1e-6) == 0);
  CHECK(rank_tol(arma::eye<cx_mat>(3, 3), 1e-6) == 3);
  cx_mat d(2, 2, arma::fill::zeros);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-9;
  CHECK(rank_tol(d, 1e-6) == 1);
  CHECK_THROWS_AS(rank_tol(d, 0.0), contract_error);
}

TEST_CASE("nuclear_norm basics") {
  CHECK(nuclear_norm(arma::eye<cx_mat>(4, 4)) == doctest::Approx(4.0));
  cx_mat d(2, 2, arma::fill::zeros);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  CHECK(nuclear_norm(d) == doctest::Approx(7.0));

  std::mt19937_64 rng(17);
  cx_vec u = random_cx(5, 1, rng);
  cx_vec v = random_cx(3, 1, rng);
  u /= arma::norm(u);
  v /= arma::norm(v);
  CHECK(nuclear_norm(5.0 * u * v.t()) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("min_eig_herm basics") {
  CHECK(min_eig_herm(arma::eye<cx_mat>(2, 2)) == doctest::Approx(1.0));
  cx_mat d(2, 2, arma::fill::zeros);
  d(0, 0) = 0.1;
  d(1, 1) = 7.0;
  CHECK(min_eig_herm(d) == doctest::Approx(0.1));

  std::mt19937_64 rng(19);
  const cx_mat a = random_cx(7, 3, rng);
  const double me = min_eig_herm(cx_mat(a.t() * a));
  const arma::vec s = svd(a).singular_values;
  CHECK(me > 0.0);
  CHECK(me == doctest::Approx(s.min() * s.min()).epsilon(1e-8));
}

TEST_CASE("norm ordering property: nuclear >= frobenius >= sigma_max") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const cx_mat m = random_cx(3 + trial % 3, 4, rng);
    const double nuc = nuclear_norm(m);
    const double fro = arma::norm(m, "fro");
    const double sig = svd(m).singular_values.max();
    CHECK(nuc >= fro - 1e-12);
    CHECK(fro >= sig - 1e-12);
  }
  // equality of nuclear and Frobenius norms iff numerically rank one
  cx_vec u = random_cx(4, 1, rng);
  cx_vec v = random_cx(4, 1, rng);
  const cx_mat r1 = u * v.t();
  CHECK(nuclear_norm(r1) == doctest::Approx(arma::norm(r1, "fro")).epsilon(1e-9));
  const double s1 = svd(r1).singular_values.max();
  CHECK(rank_tol(r1, 1e-12 * s1) <= 1);
}

TEST_CASE("block-diagonal additivity of the nuclear norm") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const cx_mat a = random_cx(3, 5, rng);
    const cx_mat b = random_cx(2, 4, rng);
    cx_mat blk(5, 9, arma::fill::zeros);
    blk.submat(0, 0, 2, 4) = a;
    blk.submat(3, 5, 4, 8) = b;
    const double lhs = nuclear_norm(blk);
    const double rhs = nuclear_norm(a) + nuclear_norm(b);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs));
  }
}

TEST_CASE("rank_tol invariance under well-conditioned right factors") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    // well-separated spectrum: a few O(1) values, the rest ~1e-9
    const int n = 5;
    const cx_mat q1 = qr_orthonormalize(random_cx(n, n, rng));
    const cx_mat q2 = qr_orthonormalize(random_cx(n, n, rng));
    arma::vec s = {1.7, 1.1, 0.9, 1e-9, 1e-9};
    const cx_mat m = q1 * arma::diagmat(arma::conv_to<cx_vec>::from(s)) * q2.t();

    cx_mat t = random_cx(n, n, rng);
    arma::vec st = svd(t).singular_values;
    if (st.max() / st.min() > 100.0) continue;  // keep to the well-conditioned regime
    const double tau = 1e-6;
    const double tau_scaled = tau * st.min();
    CHECK(rank_tol(m * t, tau_scaled) == rank_tol(m, tau));
  }
}

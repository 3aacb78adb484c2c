#include "ia/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace ia {

namespace {

bool all_real(const ChannelSet& ch) {
  for (const cx_mat& h : ch.H) {
    if (arma::norm(arma::imag(h), "fro") > 0.0) return false;
  }
  return true;
}

// Unit directions in dimension `dim`: exact angular grid for the real planar
// case, fixed-seed Gaussian sample otherwise.
std::vector<cx_vec> unit_directions(int dim, int count, bool real_field) {
  std::vector<cx_vec> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  if (real_field && dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double theta = 2.0 * M_PI * i / count;
      cx_vec v(2);
      v(0) = {std::cos(theta), 0.0};
      v(1) = {std::sin(theta), 0.0};
      dirs.push_back(std::move(v));
    }
    return dirs;
  }
  std::mt19937_64 rng(0x5EEDFACEULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    cx_vec v(dim);
    for (int j = 0; j < dim; ++j) {
      v(j) = real_field ? arma::cx_double(gauss(rng), 0.0)
                        : arma::cx_double(gauss(rng), gauss(rng));
    }
    dirs.push_back(v / arma::norm(v));
  }
  return dirs;
}

// min over accepted unit directions of |cross^H v| subject to
// Re(direct^H v) >= eps and Im(direct^H v) ~ 0 (rejection).
double best_direction(const cx_vec& direct, const cx_vec& cross, double eps,
                      const std::vector<cx_vec>& dirs) {
  double best = std::numeric_limits<double>::infinity();
  for (const cx_vec& v : dirs) {
    const arma::cx_double s = arma::cdot(direct, v);
    if (std::abs(s.imag()) > 1e-9 * std::max(1.0, std::abs(s.real()))) continue;
    if (s.real() < eps) continue;
    best = std::min(best, std::abs(arma::cdot(cross, v)));
  }
  return best;
}

void check_tiny(const ChannelSet& ch, const std::vector<cx_mat>& fixed) {
  if (ch.K != 2) {
    throw contract_error("sphere oracle: only K = 2 instances are supported");
  }
  if (fixed.size() != 2 || fixed[0].n_cols != 1 || fixed[1].n_cols != 1) {
    throw contract_error("sphere oracle: only d = 1 instances are supported");
  }
}

}  // namespace

double precoder_sphere_oracle(const ChannelSet& ch, const std::vector<cx_mat>& U_fixed,
                              double eps, int directions) {
  check_tiny(ch, U_fixed);
  const bool real_field = all_real(ch);
  const auto dirs = unit_directions(ch.M_t, directions, real_field);
  double total = 0.0;
  for (int l = 0; l < 2; ++l) {
    const int other = 1 - l;
    // S_l = u_l^H H[l][l] v_l; J_other's single entry is u_other^H H[other][l] v_l.
    const cx_vec direct = (U_fixed[static_cast<std::size_t>(l)].t() * ch.at(l, l)).t();
    const cx_vec cross = (U_fixed[static_cast<std::size_t>(other)].t() * ch.at(other, l)).t();
    total += best_direction(direct, cross, eps, dirs);
  }
  return total;
}

double zeroforcer_sphere_oracle(const ChannelSet& ch, const std::vector<cx_mat>& V_fixed,
                                double eps, int directions) {
  check_tiny(ch, V_fixed);
  const bool real_field = all_real(ch);
  const auto dirs = unit_directions(ch.M_r, directions, real_field);
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const int other = 1 - k;
    // S_k = u_k^H H[k][k] v_k; J_k's single entry is u_k^H H[k][other] v_other.
    const cx_vec direct = ch.at(k, k) * V_fixed[static_cast<std::size_t>(k)];
    const cx_vec cross = ch.at(k, other) * V_fixed[static_cast<std::size_t>(other)];
    total += best_direction(direct, cross, eps, dirs);
  }
  return total;
}

}  // namespace ia

#pragma once

#include <optional>
#include <vector>

#include "ia/model.hpp"
#include "ia/numerics.hpp"

namespace ia {

/// Per-user precoders V_k (M_t x d) and zero-forcers U_k (M_r x d).
/// When `orthonormal` is set, every matrix has orthonormal columns up to the
/// per-column power recorded in `power_db` (V only; U columns stay unit).
struct FilterSet {
  std::vector<cx_mat> V;
  std::vector<cx_mat> U;
  bool orthonormal = false;
  std::optional<double> power_db;
};

/// Signal matrices S_k = U_k^H H[k][k] V_k (d x d) and interference matrices
/// J_k = U_k^H [H[k][l] V_l]_{l != k} (d x (K-1)d, ascending l skipping k).
struct LinkMatrices {
  std::vector<cx_mat> S;
  std::vector<cx_mat> J;
};

LinkMatrices build_links(const ChannelSet& ch, const FilterSet& f);

/// Interference-free dimensions for one user: [rank(S) - rank(J)]^+ with all
/// ranks counted at threshold tau.
int per_user_dof(const cx_mat& S_k, const cx_mat& J_k, double tau);

/// Sum rate  sum_k 1/2 log2 det(I + (I + J J^H)^-1 S S^H)  in bits per
/// channel use. noise_var != 1 rescales S and J by 1/sigma first.
double sum_rate(const LinkMatrices& links, double noise_var = 1.0);

/// Total interference leakage  sum_k tr{U_k^H Q_k U_k}  with
/// Q_k = sum_{l != k} P_lin/d * H[k][l] V_l V_l^H H[k][l]^H  (trace form).
double leakage(const ChannelSet& ch, const FilterSet& f, double P_lin, int d);

/// Interference covariance Q_k at receiver k for unit per-column power.
cx_mat interference_covariance(const ChannelSet& ch, const std::vector<cx_mat>& V, int k);

/// Scales each precoder column to squared norm 10^(P_db/10)/d. Requires unit
/// columns on input; zero-forcers are unchanged.
FilterSet apply_power(const FilterSet& f, double P_db, int d);

/// Replaces every V_k, U_k by an orthonormal basis of its column space.
/// Ranks of the induced S_k, J_k are unchanged by construction.
FilterSet orthonormalize_filters(const FilterSet& f);

/// Which side of the filter pair the feasibility transform rewrites. The two
/// sides are separate transforms: applying both at once does not yield
/// Hermitian signal matrices in general.
enum class FeasibilitySide { precoders, zeroforcers };

/// Feasibility transform V_k -> V_k V_k^H H[k][k]^H U_k (precoders side) or
/// U_k -> U_k U_k^H H[k][k] V_k (zeroforcers side). With full-rank S_k on
/// input, the transformed side yields Hermitian positive definite S_k and
/// preserves the rank of every J_k.
FilterSet feasibility_transform(const ChannelSet& ch, const FilterSet& f, FeasibilitySide side);

}  // namespace ia

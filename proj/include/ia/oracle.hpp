#pragma once

#include <vector>

#include "ia/model.hpp"
#include "ia/numerics.hpp"

namespace ia {

/// Brute-force reference for the tiny (K = 2, d = 1) precoder subproblem:
/// enumerate unit-norm directions per transmit vector, reject directions
/// violating the S >= eps constraint, and take the best accepted objective.
/// For real channels with M_t = 2 the enumeration is an exact uniform angle
/// grid; otherwise a fixed-seed unit-sphere sample of the same size.
/// Returns +inf when no direction is accepted for some user. Independent of
/// the convex solver by construction.
double precoder_sphere_oracle(const ChannelSet& ch, const std::vector<cx_mat>& U_fixed,
                              double eps, int directions);

/// Mirrored oracle for the zero-forcer subproblem (fixed precoders).
double zeroforcer_sphere_oracle(const ChannelSet& ch, const std::vector<cx_mat>& V_fixed,
                                double eps, int directions);

}  // namespace ia

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ia/numerics.hpp"

namespace ia {

enum class ChannelKind { generic, diagonal_extension, cellular };

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& s);

/// Static description of a K-user MIMO interference system: K transmitter/
/// receiver pairs, M_t transmit and M_r receive antennas, d streams per user.
struct SystemConfig {
  int K = 3;
  int M_t = 8;
  int M_r = 4;
  int d = 1;
  std::vector<double> power_grid_db = {0, 10, 20, 30, 40, 50, 60, 70, 80};
  double noise_var = 1.0;
  double eps = 0.1;              // lower bound on min eigenvalue of S_k
  double dim_threshold = 1e-6;   // singular-value cutoff for dimension counts
  std::uint64_t seed = 0;
  ChannelKind kind = ChannelKind::generic;
  int extension_slots = 2;       // T, used by diagonal_extension only
  bool complex_gaussian = false; // default matches the real-Gaussian experiments

  /// Throws config_error when an invariant is broken (d > min(M_t, M_r),
  /// nonpositive counts, ...).
  void validate() const;
};

/// Cellular view of a SystemConfig: each "user" of the base system is a cell
/// of d single-stream users, each owning M_t/d transmit antennas.
struct CellularConfig {
  SystemConfig base;

  int users_per_cell() const { return base.d; }
  int per_user_antennas() const { return base.M_t / base.d; }

  /// Validates divisibility M_t % d == 0 on top of the base invariants.
  static CellularConfig from(const SystemConfig& cfg);
};

/// The K x K grid of channel matrices H[k][l] (receiver k, transmitter l),
/// each M_r x M_t. Immutable after generation.
struct ChannelSet {
  ChannelKind kind = ChannelKind::generic;
  int K = 0;
  int M_r = 0;
  int M_t = 0;
  std::vector<cx_mat> H;  // row-major: H[k * K + l]

  const cx_mat& at(int k, int l) const { return H[static_cast<std::size_t>(k) * K + l]; }
  cx_mat& at(int k, int l) { return H[static_cast<std::size_t>(k) * K + l]; }
};

/// Deterministic per-trial seed derivation: the trial index is mixed into the
/// master seed with the splitmix64 finalizer, so trials can run in any order
/// or in parallel and still reproduce bit-identically.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

/// Generic i.i.d. channel: every entry of every H[k][l] drawn N(0,1)
/// (real by default; circularly-symmetric complex when cfg.complex_gaussian).
ChannelSet gen_iid_channels(const SystemConfig& cfg, std::mt19937_64& rng);

/// T-slot symbol extension of a single-antenna link: each H[k][l] is a T x T
/// diagonal with i.i.d. Gaussian diagonal entries.
ChannelSet gen_symbol_extension_channels(const SystemConfig& cfg, int T,
                                         std::mt19937_64& rng);

/// Cellular channel: H[k][l] = [H^(1) ... H^(d)] horizontally, one
/// M_r x (M_t/d) block per user of cell l.
ChannelSet gen_cellular_channels(const CellularConfig& cfg, std::mt19937_64& rng);

/// Properness condition M_r + M_t - d(K+1) >= 0 for generic systems.
int properness_slack(const SystemConfig& cfg);
bool is_proper(const SystemConfig& cfg);

/// JSON round trip used by the harness --dump-channels / --load-channels
/// replay flags. Matrices are stored row-major as [re, im] pairs.
nlohmann::json channels_to_json(const ChannelSet& ch);
ChannelSet channels_from_json(const nlohmann::json& j);

}  // namespace ia

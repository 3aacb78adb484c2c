#include "ia/model.hpp"

#include <algorithm>

namespace ia {

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::generic: return "generic";
    case ChannelKind::diagonal_extension: return "diagonal_extension";
    case ChannelKind::cellular: return "cellular";
  }
  return "generic";
}

ChannelKind channel_kind_from_string(const std::string& s) {
  if (s == "generic") return ChannelKind::generic;
  if (s == "diagonal_extension") return ChannelKind::diagonal_extension;
  if (s == "cellular") return ChannelKind::cellular;
  throw config_error("unknown channel kind: " + s);
}

void SystemConfig::validate() const {
  if (K < 1 || M_t < 1 || M_r < 1 || d < 1) {
    throw config_error("K, M_t, M_r, d must all be positive");
  }
  if (d > std::min(M_t, M_r)) {
    throw config_error("d must satisfy d <= min(M_t, M_r)");
  }
  if (noise_var <= 0.0) {
    throw config_error("noise_var must be positive");
  }
  if (eps <= 0.0) {
    throw config_error("eps must be positive");
  }
  if (dim_threshold <= 0.0) {
    throw config_error("dim_threshold must be positive");
  }
  if (kind == ChannelKind::diagonal_extension) {
    if (extension_slots < 1) {
      throw config_error("extension_slots must be positive");
    }
    if (extension_slots < d) {
      throw config_error("extension_slots must be >= d");
    }
    if (M_t != extension_slots || M_r != extension_slots) {
      throw config_error("diagonal_extension requires M_t == M_r == extension_slots");
    }
  }
}

CellularConfig CellularConfig::from(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ChannelKind::cellular) {
    throw config_error("CellularConfig requires channel kind 'cellular'");
  }
  if (cfg.M_t % cfg.d != 0) {
    throw config_error("cellular systems need M_t divisible by d");
  }
  return CellularConfig{cfg};
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over master advanced by the stream index.
  std::uint64_t x = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

// Entries are drawn column-major per matrix, matrices in (k, l) row-major
// order, so a ChannelSet is a pure function of (config, rng state).
cx_mat draw_matrix(int rows, int cols, bool complex_gaussian, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  cx_mat m(rows, cols);
  if (complex_gaussian) {
    const double scale = 1.0 / std::sqrt(2.0);  // unit total variance
    for (arma::uword j = 0; j < m.n_cols; ++j) {
      for (arma::uword i = 0; i < m.n_rows; ++i) {
        const double re = gauss(rng) * scale;
        const double im = gauss(rng) * scale;
        m(i, j) = {re, im};
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

}  // namespace

ChannelSet gen_iid_channels(const SystemConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (cfg.kind != ChannelKind::generic) {
    throw config_error("gen_iid_channels requires channel kind 'generic'");
  }
  ChannelSet ch;
  ch.kind = ChannelKind::generic;
  ch.K = cfg.K;
  ch.M_r = cfg.M_r;
  ch.M_t = cfg.M_t;
  ch.H.reserve(static_cast<std::size_t>(cfg.K) * cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    for (int l = 0; l < cfg.K; ++l) {
      ch.H.push_back(draw_matrix(cfg.M_r, cfg.M_t, cfg.complex_gaussian, rng));
    }
  }
  return ch;
}

ChannelSet gen_symbol_extension_channels(const SystemConfig& cfg, int T,
                                         std::mt19937_64& rng) {
  cfg.validate();
  if (cfg.kind != ChannelKind::diagonal_extension) {
    throw config_error("gen_symbol_extension_channels requires kind 'diagonal_extension'");
  }
  if (T < cfg.d) {
    throw config_error("extension length T must be >= d");
  }
  ChannelSet ch;
  ch.kind = ChannelKind::diagonal_extension;
  ch.K = cfg.K;
  ch.M_r = T;
  ch.M_t = T;
  ch.H.reserve(static_cast<std::size_t>(cfg.K) * cfg.K);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = cfg.complex_gaussian ? 1.0 / std::sqrt(2.0) : 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    for (int l = 0; l < cfg.K; ++l) {
      cx_mat m(T, T, arma::fill::zeros);
      for (int t = 0; t < T; ++t) {
        if (cfg.complex_gaussian) {
          m(t, t) = {gauss(rng) * scale, gauss(rng) * scale};
        } else {
          m(t, t) = {gauss(rng), 0.0};
        }
      }
      ch.H.push_back(std::move(m));
    }
  }
  return ch;
}

ChannelSet gen_cellular_channels(const CellularConfig& cfg, std::mt19937_64& rng) {
  const SystemConfig& base = cfg.base;
  ChannelSet ch;
  ch.kind = ChannelKind::cellular;
  ch.K = base.K;
  ch.M_r = base.M_r;
  ch.M_t = base.M_t;
  ch.H.reserve(static_cast<std::size_t>(base.K) * base.K);
  const int block = cfg.per_user_antennas();
  for (int k = 0; k < base.K; ++k) {
    for (int l = 0; l < base.K; ++l) {
      cx_mat m(base.M_r, base.M_t);
      for (int u = 0; u < cfg.users_per_cell(); ++u) {
        m.cols(static_cast<arma::uword>(u) * block,
               static_cast<arma::uword>(u + 1) * block - 1) =
            draw_matrix(base.M_r, block, base.complex_gaussian, rng);
      }
      ch.H.push_back(std::move(m));
    }
  }
  return ch;
}

int properness_slack(const SystemConfig& cfg) {
  return cfg.M_r + cfg.M_t - cfg.d * (cfg.K + 1);
}

bool is_proper(const SystemConfig& cfg) { return properness_slack(cfg) >= 0; }

nlohmann::json channels_to_json(const ChannelSet& ch) {
  nlohmann::json j;
  j["K"] = ch.K;
  j["M_r"] = ch.M_r;
  j["M_t"] = ch.M_t;
  j["kind"] = to_string(ch.kind);
  nlohmann::json mats = nlohmann::json::array();
  for (const cx_mat& m : ch.H) {
    nlohmann::json entries = nlohmann::json::array();
    for (arma::uword i = 0; i < m.n_rows; ++i) {
      for (arma::uword jcol = 0; jcol < m.n_cols; ++jcol) {
        entries.push_back({m(i, jcol).real(), m(i, jcol).imag()});
      }
    }
    mats.push_back(std::move(entries));
  }
  j["matrices"] = std::move(mats);
  return j;
}

ChannelSet channels_from_json(const nlohmann::json& j) {
  ChannelSet ch;
  ch.K = j.at("K").get<int>();
  ch.M_r = j.at("M_r").get<int>();
  ch.M_t = j.at("M_t").get<int>();
  ch.kind = channel_kind_from_string(j.at("kind").get<std::string>());
  const auto& mats = j.at("matrices");
  if (mats.size() != static_cast<std::size_t>(ch.K) * ch.K) {
    throw io_error("channel JSON: expected K^2 matrices");
  }
  ch.H.reserve(mats.size());
  for (const auto& entries : mats) {
    if (entries.size() != static_cast<std::size_t>(ch.M_r) * ch.M_t) {
      throw io_error("channel JSON: matrix entry count mismatch");
    }
    cx_mat m(ch.M_r, ch.M_t);
    std::size_t idx = 0;
    for (arma::uword i = 0; i < m.n_rows; ++i) {
      for (arma::uword jcol = 0; jcol < m.n_cols; ++jcol) {
        m(i, jcol) = {entries[idx][0].get<double>(), entries[idx][1].get<double>()};
        ++idx;
      }
    }
    ch.H.push_back(std::move(m));
  }
  return ch;
}

}  // namespace ia

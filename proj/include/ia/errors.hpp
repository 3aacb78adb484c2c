#pragma once

#include <stdexcept>
#include <string>

namespace ia {

/// A caller broke a documented precondition (shape mismatch, non-Hermitian
/// input, non-unit columns, ...).
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is structurally valid but numerically degenerate (rank-deficient
/// where full rank is required). Carries the offending user index when known.
class degenerate_input_error : public std::runtime_error {
 public:
  explicit degenerate_input_error(const std::string& what, int user = -1)
      : std::runtime_error(what), user_index(user) {}
  int user_index;
};

/// A backend decomposition failed to converge. Carries the matrix dimensions.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, std::size_t rows, std::size_t cols)
      : std::runtime_error(what + " (" + std::to_string(rows) + "x" +
                           std::to_string(cols) + ")"),
        rows(rows),
        cols(cols) {}
  std::size_t rows;
  std::size_t cols;
};

/// Invalid system/experiment configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File/stream I/O failure; message names the path.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ia

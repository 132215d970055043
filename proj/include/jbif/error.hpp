#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jbif {

enum class ErrorCode {
  invalid_degree,
  positive_c,
  non_integrable_weight,
  out_of_range,
  negative_degree,
  irrational_params,
  numerical_breakdown,
  hypothesis_violation,
  k_too_small,
  structure_violation,
  nonpositive_state,
  newton_divergence,
  no_fold_bracket,
  tangency_detected,
  parity_violation,
  invalid_argument,
  invalid_config,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every library operation; carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Errors caused by bad inputs rather than by numerics.
  bool is_config_error() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace jbif

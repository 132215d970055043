#include "jbif/error.hpp"

namespace jbif {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_degree: return "invalid-degree";
    case ErrorCode::positive_c: return "positive-c";
    case ErrorCode::non_integrable_weight: return "non-integrable-weight";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::negative_degree: return "negative-degree";
    case ErrorCode::irrational_params: return "irrational-params";
    case ErrorCode::numerical_breakdown: return "numerical-breakdown";
    case ErrorCode::hypothesis_violation: return "hypothesis-violation";
    case ErrorCode::k_too_small: return "k-too-small";
    case ErrorCode::structure_violation: return "structure-violation";
    case ErrorCode::nonpositive_state: return "nonpositive-state";
    case ErrorCode::newton_divergence: return "newton-divergence";
    case ErrorCode::no_fold_bracket: return "no-fold-bracket";
    case ErrorCode::tangency_detected: return "tangency-detected";
    case ErrorCode::parity_violation: return "parity-violation";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_config: return "invalid-config";
  }
  return "unknown";
}

bool Error::is_config_error() const noexcept {
  switch (code_) {
    case ErrorCode::numerical_breakdown:
    case ErrorCode::structure_violation:
    case ErrorCode::nonpositive_state:
    case ErrorCode::newton_divergence:
    case ErrorCode::no_fold_bracket:
    case ErrorCode::tangency_detected:
      return false;
    default:
      return true;
  }
}

}  // namespace jbif

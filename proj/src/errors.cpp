#include "heyde/errors.hpp"

namespace heyde {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::not_invariant: return "not_invariant";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::atom_blowup: return "atom_blowup";
    case ErrorCode::non_psd: return "non_psd";
    case ErrorCode::atoms_outside_kernel: return "atoms_outside_kernel";
    case ErrorCode::residual_check_failed: return "residual_check_failed";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace heyde

#pragma once

#include <stdexcept>
#include <string>

namespace heyde {

/* Error conditions surfaced by the library.  Every contract violation maps to
 * exactly one of these; the C API translates them 1:1 into status codes. */
enum class ErrorCode {
  invalid_argument,       /* bad value: singular operator, bad weight, ... */
  parse_error,            /* malformed JSON or unknown/missing field */
  dimension_mismatch,     /* operands live in different ambient dimensions */
  not_invariant,          /* restriction requested onto a non-invariant subspace */
  domain_error,           /* evaluation outside a function's domain (cf too small, ...) */
  atom_blowup,            /* convolution would exceed the atom budget */
  non_psd,                /* a Gaussian exponent matrix has a negative eigenvalue */
  atoms_outside_kernel,   /* discrete factor of a witness not supported in K */
  residual_check_failed,  /* constructed witness failed its own verification */
  internal,               /* invariant broken inside the library */
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace heyde

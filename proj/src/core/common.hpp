#pragma once

#include <stdexcept>
#include <string>

namespace labelbias {

// Stable error categories, mirrored one-to-one by the C API status codes.
enum class ErrorCode {
  invalid_argument,
  invalid_params,
  singular_system,
  not_standardized,
  singular_conditioning_set,
  missing_role,
  missing_feature,
  degenerate_design,
  separation_detected,
  degenerate_target,
  invalid_variance,
  length_mismatch,
  auc_undefined,
  io_error,
  parse_error,
  unmapped_column,
  empty_after_filtering,
  invalid_config,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace labelbias

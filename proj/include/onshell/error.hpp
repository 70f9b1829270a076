#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace onshell {

/// Stable error codes; the CLI serializes them by name.
enum class ErrorCode {
  kDimensionMismatch,
  kDegreeOverflow,
  kSingularMatrix,
  kNonNormal,
  kMissingResidue,
  kNonCommuting,
  kHypothesisFailed,
  kVanishingDenominator,
  kIndexOutOfRange,
  kInvalidArgument,
  kParse,
  kInternal,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace onshell

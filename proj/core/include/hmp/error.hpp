#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hmp {

enum class ErrorCode {
  kInvalidArgument,
  kIndexOutOfRange,
  kInsufficientMoments,
  kNonHermitianInput,
  kIndefiniteSection,
  kEmptyModel,
  kNotFiniteRank,
  kDeterminateInput,
  kExcludedPoint,
  kLowerHalfPlane,
  kSingularResolvent,
  kLftSingular,
  kContractionViolated,
  kNoConvergence,
  kPoleOnSupport,
  kQuadratureNonconvergent,
  kFormat,
  kIo,
};

/// Stable kebab-case name, used as the machine-readable cause in CLI output.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hmp

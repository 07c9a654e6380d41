#include "hmp/error.hpp"

namespace hmp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kInsufficientMoments: return "insufficient-moments";
    case ErrorCode::kNonHermitianInput: return "non-hermitian-input";
    case ErrorCode::kIndefiniteSection: return "indefinite-section";
    case ErrorCode::kEmptyModel: return "empty-model";
    case ErrorCode::kNotFiniteRank: return "not-finite-rank";
    case ErrorCode::kDeterminateInput: return "determinate-input";
    case ErrorCode::kExcludedPoint: return "excluded-point";
    case ErrorCode::kLowerHalfPlane: return "lower-half-plane";
    case ErrorCode::kSingularResolvent: return "singular-resolvent";
    case ErrorCode::kLftSingular: return "lft-singular";
    case ErrorCode::kContractionViolated: return "contraction-violated";
    case ErrorCode::kNoConvergence: return "no-convergence";
    case ErrorCode::kPoleOnSupport: return "pole-on-support";
    case ErrorCode::kQuadratureNonconvergent: return "quadrature-nonconvergent";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace hmp

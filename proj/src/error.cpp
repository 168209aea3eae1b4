#include "ssrc/error.hpp"

namespace ssrc {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DimensionOverflow: return "dimension-overflow";
    case ErrorCode::InvalidOccupation: return "invalid-occupation";
    case ErrorCode::BasisMismatch: return "basis-mismatch";
    case ErrorCode::InvalidMode: return "invalid-mode";
    case ErrorCode::NonHermitian: return "non-hermitian-generator";
    case ErrorCode::DegenerateNormalization: return "degenerate-normalization";
    case ErrorCode::ZeroLeadingCoefficient: return "zero-leading-coefficient";
    case ErrorCode::TargetOrderExceedsMax: return "target-order-exceeds-max";
    case ErrorCode::AmplitudeBound: return "amplitude-bound";
    case ErrorCode::WindowTooSmall: return "window-too-small";
    case ErrorCode::NonOrthogonal: return "non-orthogonal-code-states";
    case ErrorCode::NearDegenerate: return "near-degenerate";
    case ErrorCode::ConfigParse: return "config-parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

}  // namespace ssrc

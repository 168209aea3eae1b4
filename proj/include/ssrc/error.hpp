#pragma once

#include <stdexcept>
#include <string>

namespace ssrc {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionOverflow,
  InvalidOccupation,
  BasisMismatch,
  InvalidMode,
  NonHermitian,
  DegenerateNormalization,
  ZeroLeadingCoefficient,
  TargetOrderExceedsMax,
  AmplitudeBound,
  WindowTooSmall,
  NonOrthogonal,
  NearDegenerate,
  ConfigParse,
  Io,
  Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ssrc

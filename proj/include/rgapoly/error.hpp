#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rgapoly {

enum class ErrorCode {
  MalformedHeader,
  DimensionMismatch,
  ValueOutOfRange,
  ImageTooSmall,
  IoError,
  DegenerateComponent,
  ZeroLengthSegment,
  ClosureViolation,
  NoStructureEdges,
  NearParallel,
  DegenerateGap,
  TooFewEdges,
  ShapeOutOfCanvas,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// All library failures are reported as Error; code() identifies the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rgapoly

#include "rgapoly/error.hpp"

namespace rgapoly {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DegenerateComponent: return "DegenerateComponent";
    case ErrorCode::ZeroLengthSegment: return "ZeroLengthSegment";
    case ErrorCode::ClosureViolation: return "ClosureViolation";
    case ErrorCode::NoStructureEdges: return "NoStructureEdges";
    case ErrorCode::NearParallel: return "NearParallel";
    case ErrorCode::DegenerateGap: return "DegenerateGap";
    case ErrorCode::TooFewEdges: return "TooFewEdges";
    case ErrorCode::ShapeOutOfCanvas: return "ShapeOutOfCanvas";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace rgapoly

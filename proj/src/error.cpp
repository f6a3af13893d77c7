#include "cbounds/error.hpp"

namespace cbounds {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPartitioned: return "NotPartitioned";
    case ErrorCode::kANodeHasParent: return "ANodeHasParent";
    case ErrorCode::kAChildless: return "AChildless";
    case ErrorCode::kConfounderSpansPartition: return "ConfounderSpansPartition";
    case ErrorCode::kNotTopological: return "NotTopological";
    case ErrorCode::kScopeOutsideB: return "ScopeOutsideB";
    case ErrorCode::kInvalidQuery: return "InvalidQuery";
    case ErrorCode::kInvalidObservation: return "InvalidObservation";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidTable: return "InvalidTable";
    case ErrorCode::kObservationInvalidatesQuery: return "ObservationInvalidatesQuery";
    case ErrorCode::kObservationImpossible: return "ObservationImpossible";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kSizeCap: return "SizeCap";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "Unknown";
}

ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCapExceeded:
    case ErrorCode::kCapacityExceeded:
    case ErrorCode::kSizeCap:
      return ErrorCategory::kCapacity;
    case ErrorCode::kParse:
    case ErrorCode::kIo:
      return ErrorCategory::kInput;
    case ErrorCode::kInternal:
    case ErrorCode::kUnbounded:
      return ErrorCategory::kInternal;
    default:
      return ErrorCategory::kModel;
  }
}

}  // namespace cbounds

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbounds {

enum class ErrorCode {
  // graph structure
  kNotPartitioned,
  kANodeHasParent,
  kAChildless,
  kConfounderSpansPartition,
  kNotTopological,
  kScopeOutsideB,
  kInvalidQuery,
  kInvalidObservation,
  kDimensionMismatch,
  // probability tables and models
  kInvalidTable,
  kObservationInvalidatesQuery,
  kObservationImpossible,
  kPreconditionFailed,
  kInfeasible,
  kUnbounded,
  // capacity guards
  kCapExceeded,
  kCapacityExceeded,
  kSizeCap,
  // input handling
  kParse,
  kIo,
  kInternal,
};

enum class ErrorCategory { kModel, kCapacity, kInput, kInternal };

std::string_view to_string(ErrorCode code);
ErrorCategory category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cbounds

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stabforge {

enum class ErrorCode {
  NotStable,
  UnsupportedObject,
  RearrangementBlocked,
  InvalidPhaseStep,
  NotAdmissible,
  SupportViolated,
  InconsistentData,
  ZeroClass,
  QuadratureNotConverged,
  FlowSingular,
  NonMonotone,
  TrackingLost,
  StepCollapse,
  Truncated,
  ConfigInvalid,
  IOFailure,
};

std::string_view error_name(ErrorCode code);

/// Every library failure surfaces as this type; `witness` carries the
/// offending data in printable form when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string witness = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::string witness_;
};

}  // namespace stabforge

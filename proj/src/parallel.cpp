#include "stabforge/parallel.hpp"
#include "stabforge/errors.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace stabforge {

int worker_count() {
  int workers = omp_get_max_threads();
  if (const char* env = std::getenv("STABFORGE_THREADS")) {
    int cap = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc{} && *ptr == '\0' && cap > 0 && cap < workers) workers = cap;
  }
  return workers < 1 ? 1 : workers;
}

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStable: return "NotStable";
    case ErrorCode::UnsupportedObject: return "UnsupportedObject";
    case ErrorCode::RearrangementBlocked: return "RearrangementBlocked";
    case ErrorCode::InvalidPhaseStep: return "InvalidPhaseStep";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::SupportViolated: return "SupportViolated";
    case ErrorCode::InconsistentData: return "InconsistentData";
    case ErrorCode::ZeroClass: return "ZeroClass";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::FlowSingular: return "FlowSingular";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::TrackingLost: return "TrackingLost";
    case ErrorCode::StepCollapse: return "StepCollapse";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IOFailure: return "IOFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::string witness)
    : std::runtime_error(std::string(error_name(code)) + ": " + message),
      code_(code),
      witness_(std::move(witness)) {}

}  // namespace stabforge

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lightcone {

enum class ErrorCode {
  NotUnitTimelike,
  NonpositiveRadius,
  NonpositiveRadialFunction,
  DivisionByZeroJet,
  DomainError,
  OrderExceeded,
  NotSpacelike,
  DegenerateNormalFrame,
  GaussMapUndefined,
  DegenerateMetric,
  DegeneracyViolation,
  NotRiemannianII,
  NotCompact,
  EigenSolverFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map them onto exit statuses.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lightcone

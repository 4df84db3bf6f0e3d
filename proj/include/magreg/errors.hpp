#pragma once

#include <stdexcept>
#include <string>

namespace magreg {

enum class ErrorKind {
  InvalidDimension,
  NonSymmetric,
  NotElliptic,
  SingularMatrix,
  NotPositiveDefinite,
  OnSingularSet,
  NotTangential,
  NegativePotential,
  TruncationTooSmall,
  NotHermitian,
  NoConvergence,
  NegativeQ,
  BetaOutOfRange,
  NotClosed,
  OnAxis,
  OnSolenoid,
  TailNotIntegrable,
  VanishingCurvature,
  NotArcLength,
  OutsideTube,
  SingularJacobian,
  BasisIncomplete,
  DegenerateMode,
  IllConditioned,
  InsufficientRange,
  NotCompactlySupported,
  InvalidArgument,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace magreg

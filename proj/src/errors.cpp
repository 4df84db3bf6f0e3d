#include "magreg/errors.hpp"

namespace magreg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::OnSingularSet: return "OnSingularSet";
    case ErrorKind::NotTangential: return "NotTangential";
    case ErrorKind::NegativePotential: return "NegativePotential";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NegativeQ: return "NegativeQ";
    case ErrorKind::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::OnAxis: return "OnAxis";
    case ErrorKind::OnSolenoid: return "OnSolenoid";
    case ErrorKind::TailNotIntegrable: return "TailNotIntegrable";
    case ErrorKind::VanishingCurvature: return "VanishingCurvature";
    case ErrorKind::NotArcLength: return "NotArcLength";
    case ErrorKind::OutsideTube: return "OutsideTube";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::BasisIncomplete: return "BasisIncomplete";
    case ErrorKind::DegenerateMode: return "DegenerateMode";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::InsufficientRange: return "InsufficientRange";
    case ErrorKind::NotCompactlySupported: return "NotCompactlySupported";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace magreg

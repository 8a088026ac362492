#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fractal_spectra {

enum class ErrorKind {
  InvalidProjectivePoint,
  NoBracket,
  NumericOverflow,
  InvalidArgument,
  LevelTooLarge,
  DecimationMismatch,
  DivergentSequence,
  InvalidSequence,
  UnsupportedAlpha,
  DepthTooLarge,
  IndeterminacyPoint,
  GridTooCoarse,
  CoverageError,
  NotAnEigenvalue,
  SingularInterior,
  ProjectiveInfinity,
  PoleEncountered,
  OutsideConvergenceStrip,
  NearPole,
  InvalidAnnulus,
  OnCircleBoundary,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidProjectivePoint: return "InvalidProjectivePoint";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::NumericOverflow: return "NumericOverflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
    case ErrorKind::DecimationMismatch: return "DecimationMismatch";
    case ErrorKind::DivergentSequence: return "DivergentSequence";
    case ErrorKind::InvalidSequence: return "InvalidSequence";
    case ErrorKind::UnsupportedAlpha: return "UnsupportedAlpha";
    case ErrorKind::DepthTooLarge: return "DepthTooLarge";
    case ErrorKind::IndeterminacyPoint: return "IndeterminacyPoint";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::CoverageError: return "CoverageError";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::SingularInterior: return "SingularInterior";
    case ErrorKind::ProjectiveInfinity: return "ProjectiveInfinity";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::OutsideConvergenceStrip: return "OutsideConvergenceStrip";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::InvalidAnnulus: return "InvalidAnnulus";
    case ErrorKind::OnCircleBoundary: return "OnCircleBoundary";
  }
  return "Unknown";
}

/// Engine error carrying a machine-readable kind; what() is "<Kind>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace fractal_spectra

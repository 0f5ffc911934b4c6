#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

enum class Errc {
  BallOutsideDomain,
  BallBelowResolution,
  GridTooCoarse,
  MalformedHeader,
  DimensionMismatch,
  NonFiniteValue,
  IoError,
  NonNegativityViolation,
  AlphaOutOfRange,
  NonConvergence,
  DegenerateGrid,
  ShapeMismatch,
  InadmissibleParams,
  SearchRangeExhausted,
  FinitenessFailure,
  PRangeError,
  NoAdmissibleBalls,
  QuadratureFailure,
  ResidualTooLarge,
  ParameterRangeViolation,
  QuasiIncreasingViolation,
  InsufficientRadii,
  ConfigParse,
  InvalidArgument,
};

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::BallOutsideDomain: return "BallOutsideDomain";
    case Errc::BallBelowResolution: return "BallBelowResolution";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::IoError: return "IoError";
    case Errc::NonNegativityViolation: return "NonNegativityViolation";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::DegenerateGrid: return "DegenerateGrid";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InadmissibleParams: return "InadmissibleParams";
    case Errc::SearchRangeExhausted: return "SearchRangeExhausted";
    case Errc::FinitenessFailure: return "FinitenessFailure";
    case Errc::PRangeError: return "PRangeError";
    case Errc::NoAdmissibleBalls: return "NoAdmissibleBalls";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::ResidualTooLarge: return "ResidualTooLarge";
    case Errc::ParameterRangeViolation: return "ParameterRangeViolation";
    case Errc::QuasiIncreasingViolation: return "QuasiIncreasingViolation";
    case Errc::InsufficientRadii: return "InsufficientRadii";
    case Errc::ConfigParse: return "ConfigParse";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wlab

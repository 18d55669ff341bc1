#include "freeconv/error.hpp"

namespace freeconv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeDensity: return "NegativeDensity";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::NonPositiveEps: return "NonPositiveEps";
    case ErrorKind::QuantileOutOfRange: return "QuantileOutOfRange";
    case ErrorKind::BadArgument: return "BadArgument";
    case ErrorKind::TooCloseToSupport: return "TooCloseToSupport";
    case ErrorKind::TooFewMoments: return "TooFewMoments";
    case ErrorKind::SeriesNotConverged: return "SeriesNotConverged";
    case ErrorKind::SolverDiverged: return "SolverDiverged";
    case ErrorKind::KLessThanOne: return "KLessThanOne";
    case ErrorKind::OnSupport: return "OnSupport";
    case ErrorKind::DegeneratePoints: return "DegeneratePoints";
    case ErrorKind::DisconnectedSupport: return "DisconnectedSupport";
    case ErrorKind::ConeBoundary: return "ConeBoundary";
    case ErrorKind::NonPositiveLambdaY: return "NonPositiveLambdaY";
    case ErrorKind::BadMinorDim: return "BadMinorDim";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace freeconv

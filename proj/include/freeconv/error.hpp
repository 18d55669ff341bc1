#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace freeconv {

enum class ErrorKind {
  NegativeDensity,
  ZeroMass,
  GridTooSmall,
  NonPositiveVariance,
  NonPositiveScale,
  NonPositiveEps,
  QuantileOutOfRange,
  BadArgument,
  TooCloseToSupport,
  TooFewMoments,
  SeriesNotConverged,
  SolverDiverged,
  KLessThanOne,
  OnSupport,
  DegeneratePoints,
  DisconnectedSupport,
  ConeBoundary,
  NonPositiveLambdaY,
  BadMinorDim,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every module error carries its kind so the CLI can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace freeconv

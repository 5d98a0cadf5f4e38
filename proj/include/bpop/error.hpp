// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bpop
{

enum class ErrorCode
{
  NonSquare,
  NonHermitian,
  NotPositiveDefinite,
  Singular,
  NoConvergence,
  DimensionMismatch,
  InvalidArgument,
  InvalidRadius,
  SpaceMismatch,
  Breakdown,
  NotHpd,
  MissingCompactPart,
  MissingExactSolution,
  MismatchedRuns,
  Io
};

constexpr std::string_view errorName(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::Breakdown: return "Breakdown";
    case ErrorCode::NotHpd: return "NotHpd";
    case ErrorCode::MissingCompactPart: return "MissingCompactPart";
    case ErrorCode::MissingExactSolution: return "MissingExactSolution";
    case ErrorCode::MismatchedRuns: return "MismatchedRuns";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class NumericError : public std::runtime_error
{
public:
  NumericError(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(errorName(code)) + ": " + what), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace bpop

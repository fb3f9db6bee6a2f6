#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mxsefl {

enum class ErrorCode {
  MissingTableEntry,
  EmptyCollection,
  EmptyBundle,
  DimensionMismatch,
  CyclicGraph,
  FreeInteriorVertex,
  InstanceTooLarge,
  NoFairAssociation,
  IterationCapExceeded,
  InvariantViolation,
  NotRestrictedMmsFeasible,
  InvalidSpec,
  InvalidValuation,
  ParseError,
  ArithmeticOverflow,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingTableEntry: return "MissingTableEntry";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::EmptyBundle: return "EmptyBundle";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::FreeInteriorVertex: return "FreeInteriorVertex";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::NoFairAssociation: return "NoFairAssociation";
    case ErrorCode::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::NotRestrictedMmsFeasible: return "NotRestrictedMmsFeasible";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidValuation: return "InvalidValuation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mxsefl

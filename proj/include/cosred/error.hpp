#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cosred {

enum class ErrorCode {
  InvalidArgument,
  InvalidPoset,
  UnknownLabel,
  CyclicRelation,
  NoUniqueMinimum,
  InvalidSpec,
  EqualDimensionAssumptionViolated,
  NotStarredType,
  NoSuchSeam,
  InconsistentDimensions,
  NotAlmostSemifree,
  MultipleOrbitTypes,
  InvalidPoint,
  NotOnZeroLevel,
  EmptyKernel,
  RetriesExhausted,
  NoMatchingStratum,
  AmbiguousStratum,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPoset: return "InvalidPoset";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::CyclicRelation: return "CyclicRelation";
    case ErrorCode::NoUniqueMinimum: return "NoUniqueMinimum";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EqualDimensionAssumptionViolated: return "EqualDimensionAssumptionViolated";
    case ErrorCode::NotStarredType: return "NotStarredType";
    case ErrorCode::NoSuchSeam: return "NoSuchSeam";
    case ErrorCode::InconsistentDimensions: return "InconsistentDimensions";
    case ErrorCode::NotAlmostSemifree: return "NotAlmostSemifree";
    case ErrorCode::MultipleOrbitTypes: return "MultipleOrbitTypes";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::NotOnZeroLevel: return "NotOnZeroLevel";
    case ErrorCode::EmptyKernel: return "EmptyKernel";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::NoMatchingStratum: return "NoMatchingStratum";
    case ErrorCode::AmbiguousStratum: return "AmbiguousStratum";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cosred

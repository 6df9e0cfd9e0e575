#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lieform {

enum class ErrorCode {
  InvalidRing,
  RingMismatch,
  UnsupportedRing,
  DimensionMismatch,
  NotInvertible,
  Singular,
  NotASubspace,
  NoCanonicalMorphism,
  NonIntegralDenominator,
  InvalidRank,
  NotClassical,
  NotPerfect,
  NoConstantRatio,
  NotALieAlgebra,
  DimensionTooLarge,
  NotACocycle,
  NotAutomorphism,
  OutOfRange,
  HypothesisNotMet,
  ActionMissing,
  InvalidModule,
  NotNilpotentEnough,
  Schema,
};

std::string_view error_name(ErrorCode code);

/// Every library failure is reported through this exception; `code()` names
/// the failure kind so callers (the CLI in particular) can map it to a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace lieform

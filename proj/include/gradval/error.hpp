#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradval {

enum class ErrorCode {
  DivisionByZero,
  DescriptorMismatch,
  NegativeValue,
  InvalidDescriptor,
  UnknownElement,
  NotSubgroupoid,
  NormalityViolation,
  TooLarge,
  ParentMismatch,
  InvalidTwist,
  CharacteristicObstruction,
  KindMismatch,
  NotMember,
  NotTotal,
  NotStrong,
  LengthViolation,
  DivergentClosure,
  NotGValuationRing,
  IncomparableComponents,
  NotInvertible,
  HypothesisViolation,
  ParseError,
  ValidationError,
  UnknownExample,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gradval

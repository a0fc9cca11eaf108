#include "gradval/error.hpp"

namespace gradval {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DescriptorMismatch: return "DescriptorMismatch";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::NotSubgroupoid: return "NotSubgroupoid";
    case ErrorCode::NormalityViolation: return "NormalityViolation";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParentMismatch: return "ParentMismatch";
    case ErrorCode::InvalidTwist: return "InvalidTwist";
    case ErrorCode::CharacteristicObstruction: return "CharacteristicObstruction";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::NotTotal: return "NotTotal";
    case ErrorCode::NotStrong: return "NotStrong";
    case ErrorCode::LengthViolation: return "LengthViolation";
    case ErrorCode::DivergentClosure: return "DivergentClosure";
    case ErrorCode::NotGValuationRing: return "NotGValuationRing";
    case ErrorCode::IncomparableComponents: return "IncomparableComponents";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownExample: return "UnknownExample";
  }
  return "Unknown";
}

}  // namespace gradval

#include "vbm/error.hpp"

#include <utility>

namespace vbm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotConvergent: return "NotConvergent";
    case ErrorCode::NotZPattern: return "NotZPattern";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::CertificationFailed: return "CertificationFailed";
    case ErrorCode::BClassUnsupported: return "BClassUnsupported";
    case ErrorCode::ContractionViolated: return "ContractionViolated";
    case ErrorCode::GraphConditionViolated: return "GraphConditionViolated";
    case ErrorCode::SubordinationViolated: return "SubordinationViolated";
    case ErrorCode::NoFixedPointFound: return "NoFixedPointFound";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NotDescending: return "NotDescending";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ConditionHFailed: return "ConditionHFailed";
    case ErrorCode::PreconditionCiFailed: return "PreconditionCiFailed";
    case ErrorCode::Cc1Violated: return "Cc1Violated";
    case ErrorCode::Cc2Violated: return "Cc2Violated";
    case ErrorCode::NoFixedPoint: return "NoFixedPoint";
    case ErrorCode::ConclusionViolated: return "ConclusionViolated";
    case ErrorCode::InternalError: return "InternalError";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected,
                         const std::string& message)
    : Error(ErrorCode::SyntaxError, message),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace vbm

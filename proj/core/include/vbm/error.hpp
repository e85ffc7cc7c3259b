#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vbm {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  NotNonnegative,
  NotPositive,
  NotConvergent,
  NotZPattern,
  SyntaxError,
  UnboundVariable,
  DomainError,
  EvalError,
  CertificationFailed,
  BClassUnsupported,
  ContractionViolated,
  GraphConditionViolated,
  SubordinationViolated,
  NoFixedPointFound,
  DimensionUnsupported,
  EmptySet,
  NotDescending,
  HypothesisViolated,
  ConditionHFailed,
  PreconditionCiFailed,
  Cc1Violated,
  Cc2Violated,
  NoFixedPoint,
  ConclusionViolated,
  InternalError,
  InvalidInput,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure in the expression language. `offset` is a byte offset into
// the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected,
              const std::string& message);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// A hypothesis of an existence theorem failed on a concrete instance. Carries
// the step and point indices that witness the failure.
class HypothesisError : public Error {
 public:
  HypothesisError(ErrorCode code, const std::string& message, long step,
                  std::vector<std::size_t> witness)
      : Error(code, message), step_(step), witness_(std::move(witness)) {}

  long step() const noexcept { return step_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }

 private:
  long step_;
  std::vector<std::size_t> witness_;
};

}  // namespace vbm

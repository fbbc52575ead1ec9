#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace symop {

enum class ErrorCode {
  Syntax,
  Domain,
  UnboundParameter,
  Unsupported,
  NonElementary,
  NotMonotone,
  UndecidableComparison,
  InconsistentEnv,
  OverlappingGuards,
  GapInGuards,
  NonConvex,
  DiscontinuousOnDomain,
  NotLsc,
  NegativeScalar,
  EmptyOperator,
  GapInDomain,
  ConstantPinFailure,
  NoFirstMoment,
  UnsupportedTail,
  POutOfRange,
  InvalidDistribution,
  DimensionMismatch,
  WindowOutsideDomain,
  MaxIterations,
  Internal,
};

// Stable identifier used in diagnostics and CLI output.
const char* error_name(ErrorCode code);

// Internal inconsistencies map to exit code 3, everything else to 2.
bool is_internal(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& detail);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace symop

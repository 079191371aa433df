#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causal_econf {

enum class ErrorCode {
  NonPositiveEntry,
  NotNormalized,
  EmptyAxis,
  IndexOutOfRange,
  StrategyRangeError,
  NonPositiveC,
  NonPositiveF,
  NonPositiveAlpha,
  CountMismatch,
  BudgetExceeded,
  NotDegenerate,
  NotRational,
  InvalidArgument,
  MissingField,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; the code is what
// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace causal_econf

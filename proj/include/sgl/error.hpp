#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sgl {

enum class ErrorKind {
  InvalidInterval,
  InvalidPeriod,
  InvalidArgument,
  NumericalFailure,
  IllConditioned,
  HypothesisViolated,
  BudgetExceeded,
  DegenerateTranslates,
  OutOfRange,
  SpectrumMismatch,
  InvalidArity,
  StepsDependent,
  NoCertificate,
  NonInterpolating,
  NotContraction,
  InvalidTrials,
  InsufficientHits,
  ContainmentViolation,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. `value()` carries the number that
// triggered it when there is one (best residual, observed sup, row sum, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> value = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<double> value_;
};

}  // namespace sgl

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kvstring {

enum class ErrorKind {
  NonPositiveCoefficient,
  AssumptionViolated,
  RieszConstantDegenerate,
  GridMismatch,
  GridTooCoarse,
  InvalidArgument,
  CompatibilityViolated,
  TruncationInsufficient,
  StepUnstableOrSingular,
  HorizonTooShort,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// front-ends can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kvstring

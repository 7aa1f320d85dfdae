#include "kvstring/error.hpp"

namespace kvstring {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::RieszConstantDegenerate: return "RieszConstantDegenerate";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::CompatibilityViolated: return "CompatibilityViolated";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::StepUnstableOrSingular: return "StepUnstableOrSingular";
    case ErrorKind::HorizonTooShort: return "HorizonTooShort";
  }
  return "Unknown";
}

}  // namespace kvstring

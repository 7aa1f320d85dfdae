#include "kvstring/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kvstring/error.hpp"

namespace kvstring {

StringParams validate_params(double alpha, double beta, double reject_tol) {
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::NonPositiveCoefficient,
                "alpha and beta must be finite and positive (alpha=" + std::to_string(alpha) +
                    ", beta=" + std::to_string(beta) + ")");
  }
  if (!(reject_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "assumption tolerance must be positive");
  }

  const double s = 2.0 * std::sqrt(alpha) / (std::numbers::pi * beta) - 0.5;
  const double margin = s < 0.0 ? -s : std::abs(s - std::round(s));
  if (margin <= reject_tol) {
    throw Error(ErrorKind::AssumptionViolated,
                "2*sqrt(alpha)/(pi*beta) - 1/2 lies within " + std::to_string(margin) +
                    " of a non-negative integer: the spectrum is (nearly) defective");
  }
  const int k0 = s <= 0.0 ? 0 : static_cast<int>(std::ceil(s));
  return StringParams(alpha, beta, margin, k0);
}

ModeIndex::ModeIndex(int k_, int eps_) : k(k_), eps(eps_) {
  if (k_ < 0 || (eps_ != 1 && eps_ != -1)) {
    throw Error(ErrorKind::InvalidArgument, "mode index needs k >= 0 and eps in {-1, +1}");
  }
}

}  // namespace kvstring

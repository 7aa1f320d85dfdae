#pragma once

namespace kvstring {

inline constexpr double kDefaultAssumptionTolerance = 1e-9;

/// Physical coefficients of the clamped-free Kelvin-Voigt string:
/// stiffness alpha and internal damping beta, both already normalized to a
/// unit-length string. Only obtainable through validate_params().
class StringParams {
 public:
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// Distance of 2*sqrt(alpha)/(pi*beta) - 1/2 to the nearest non-negative
  /// integer. Zero means a defective (double) eigenvalue pair.
  double assumption_margin() const noexcept { return margin_; }

  /// First mode index of the overdamped (real) branch.
  int k0() const noexcept { return k0_; }

  friend StringParams validate_params(double alpha, double beta, double reject_tol);

 private:
  StringParams(double alpha, double beta, double margin, int k0)
      : alpha_(alpha), beta_(beta), margin_(margin), k0_(k0) {}

  double alpha_;
  double beta_;
  double margin_;
  int k0_;
};

/// Throws Error(NonPositiveCoefficient) or Error(AssumptionViolated).
StringParams validate_params(double alpha, double beta,
                             double reject_tol = kDefaultAssumptionTolerance);

/// Mode label (k, eps). k_tilde = k + 1/2 is the spatial wavenumber / pi.
struct ModeIndex {
  int k = 0;
  int eps = 1;

  ModeIndex() = default;
  ModeIndex(int k_, int eps_);

  double k_tilde() const noexcept { return k + 0.5; }

  /// Position in the canonical ordering (0,-1), (0,+1), (1,-1), ...
  int flat() const noexcept { return 2 * k + (eps > 0 ? 1 : 0); }
  static ModeIndex from_flat(int i) { return ModeIndex(i / 2, (i % 2) != 0 ? 1 : -1); }

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

}  // namespace kvstring

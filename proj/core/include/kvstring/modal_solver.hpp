#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kvstring/signals.hpp"
#include "kvstring/state.hpp"

namespace kvstring {

inline constexpr double kDefaultCompatibilityTolerance = 1e-6;
inline constexpr double kDefaultTruncationRelTol = 0.2;
inline constexpr int kDefaultTruncation = 64;
inline constexpr int kDefaultSubsteps = 4;

struct SimulationConfig {
  SimulationConfig(StringParams p, StateVector x0) : params(p), initial(std::move(x0)) {}

  StringParams params;
  StateVector initial;
  BoundarySignal d;
  DistributedSignal u;
  double t_end = 1.0;
  double dt = 1e-2;  ///< output step; t_end must be a whole number of steps
  int truncation = kDefaultTruncation;
  int substeps = kDefaultSubsteps;  ///< forcing samples per output step
  double compat_tol = kDefaultCompatibilityTolerance;
  /// TruncationInsufficient is raised when truncation_bound exceeds this
  /// fraction of ||X0|| + d_sup + u_sup. Non-positive disables the check.
  double truncation_rel_tol = kDefaultTruncationRelTol;
  bool store_states = false;
  std::optional<UniformGrid> state_grid;  ///< defaults to the initial state's grid
};

struct Trajectory {
  std::string solver;
  std::vector<double> times;
  std::vector<CoefficientSet> coefficients;  ///< spectral solver only
  std::vector<StateVector> states;           ///< when materialized
  std::vector<double> h_norms;
  std::vector<double> d_sup;  ///< sup_{[0,t]} |d|
  std::vector<double> u_sup;  ///< sup_{[0,t]} ||u||_{L^2}
  std::vector<double> d_l2;   ///< ||d||_{L^2(0,t)}
  std::vector<double> u_l2;   ///< ||u||_{L^2((0,t) x (0,1))}
  double initial_norm = 0.0;
  double truncation_bound = 0.0;
};

/// Output instants 0, dt, ..., t_end. Throws InvalidArgument unless t_end is a
/// whole multiple of dt (to 1e-9 relative).
std::vector<double> output_times(double t_end, double dt);

struct RunningNorms {
  std::vector<double> d_sup, u_sup, d_l2, u_l2;
};

/// Running disturbance norms at the output instants. Sup norms combine the
/// substep samples with the analytic sup of each signal; L2 norms integrate
/// each substep with 3-point Gauss-Legendre.
RunningNorms running_norms(const BoundarySignal& d, const DistributedSignal& u,
                           std::span<const double> times, int substeps);

/// int_0^1 u(t, x) sin(k~ pi x) dx for all k <= truncation, evaluated by
/// reducing the spatial profile(s) once.
class SineMoments {
 public:
  SineMoments(const DistributedSignal& u, int truncation);
  bool is_zero() const noexcept { return kind_ == Kind::zero; }
  /// Moments for every k at time t.
  void at(double t, std::vector<cplx>& out) const;

 private:
  enum class Kind { zero, separable, table };
  Kind kind_ = Kind::zero;
  const DistributedSignal* u_ = nullptr;
  std::vector<cplx> profile_moments_;
  std::vector<double> times_;
  std::vector<std::vector<cplx>> row_moments_;
};

/// f(t) = d(t) conj(Psi^2(1)) + <u(t), Psi^2>_{L^2} at the given times.
std::vector<cplx> modal_forcing(const StringParams& params, const ModeData& mode,
                                const BoundarySignal& d, const DistributedSignal& u,
                                std::span<const double> times);

/// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2, with a Taylor
/// expansion near zero.
cplx phi1(cplx z);
cplx phi2(cplx z);

/// Exponential-integrator propagation of c' = lambda c + f with f linear
/// between the samples. forcing[i] is f at t0 + i*step; the result holds c at
/// the same instants, starting with c0.
std::vector<cplx> integrate_mode(cplx lambda, cplx c0, std::span<const cplx> forcing, double step);

/// Single step of the same scheme.
class ModeStepper {
 public:
  ModeStepper(cplx lambda, double step);
  cplx advance(cplx c, cplx f0, cplx f1) const {
    return mul(growth_, c) + mul(w0_, f0) + mul(w1_, f1);
  }

 private:
  static cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
  }
  cplx growth_, w0_, w1_;
};

/// Estimate of the H-norm carried by modes k > N: a tail gain computed from
/// the asymptotic envelope of gamma_{k,eps}^2 (safety factor 4) times
/// (d_sup + u_sup), plus the tail of the initial state.
double truncation_bound(const StringParams& params, int truncation, double d_sup, double u_sup,
                        double initial_tail = 0.0);

/// sqrt(max(0, ||X0||^2 - ||P_N X0||^2)) with ||X0|| by quadrature.
double initial_tail_norm(const StateVector& initial, const ModalBasis& basis,
                         const CoefficientSet& coeffs);

bool check_compatibility(const StateVector& initial, const BoundarySignal& d,
                         const StringParams& params,
                         double tol = kDefaultCompatibilityTolerance);

Trajectory simulate_spectral(const SimulationConfig& config);

/// Columns t,norm_H,d_sup,u_sup,d_l2,u_l2 and, when requested and available,
/// c_<k>_<m|p>_re / _im per mode.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool with_coefficients = false);

}  // namespace kvstring

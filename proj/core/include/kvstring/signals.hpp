#pragma once

#include <string>
#include <variant>
#include <vector>

#include "kvstring/grid.hpp"
#include "kvstring/spectrum.hpp"

namespace kvstring {

namespace signal {

struct Zero {};

/// amplitude * sin(frequency * t + phase), frequency in rad per unit time.
struct Sine {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
};

/// amplitude * exp(-rate * t), rate >= 0.
struct DecayingExp {
  double amplitude = 1.0;
  double rate = 1.0;
};

/// amplitude * 64 (s(1-s))^3 with s = (t - t0)/(t1 - t0) on [t0, t1], zero
/// elsewhere. Value, first and second derivative all vanish at t0 and t1.
struct PolyPulse {
  double t0 = 0.0;
  double t1 = 1.0;
  double amplitude = 1.0;
};

/// Quintic Hermite interpolation of samples carrying value, first and
/// second derivative, which keeps the signal C^2 between the knots.
struct Sampled {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> first;
  std::vector<double> second;
};

}  // namespace signal

/// Boundary disturbance d(t) entering through the free-end force condition.
class BoundarySignal {
 public:
  using Kind = std::variant<signal::Zero, signal::Sine, signal::DecayingExp, signal::PolyPulse,
                            signal::Sampled>;

  BoundarySignal() = default;
  BoundarySignal(Kind kind, std::string description = {});

  static BoundarySignal zero() { return {}; }

  const Kind& kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  bool is_zero() const noexcept { return std::holds_alternative<signal::Zero>(kind_); }
  bool is_sampled() const noexcept { return std::holds_alternative<signal::Sampled>(kind_); }

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// sup_{s in [0, t]} |d(s)|. Exact for the built-in kinds; for sampled
  /// signals the max over the knots in [0, t] plus the value at t, which can
  /// undershoot the true supremum.
  double sup_abs(double t) const;

  /// Latest time the signal is defined at (infinity for the built-in kinds).
  double horizon() const;

 private:
  Kind kind_ = signal::Zero{};
  std::string description_;
};

namespace signal {

/// profile(x) * time_factor(t), profile sampled on a uniform grid.
struct Separable {
  UniformGrid grid{2};
  std::vector<cplx> profile;
  BoundarySignal time_factor;
};

/// Table u(t_i, x_j), linear in time between rows. Only continuous in time:
/// this is the mild-solution mode, it does not certify C^1 regularity.
struct Table {
  std::vector<double> times;
  UniformGrid grid{2};
  std::vector<std::vector<cplx>> rows;
};

}  // namespace signal

/// Distributed disturbance u(t, x) acting in the momentum equation.
class DistributedSignal {
 public:
  using Kind = std::variant<signal::Zero, signal::Separable, signal::Table>;

  DistributedSignal() = default;
  explicit DistributedSignal(Kind kind, std::string description = {});

  static DistributedSignal zero() { return {}; }

  const Kind& kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  bool is_zero() const noexcept { return std::holds_alternative<signal::Zero>(kind_); }

  /// ||u(t, .)||_{L^2(0,1)}.
  double l2_norm_at(double t) const;

  /// sup_{s in [0, t]} ||u(s, .)||_{L^2}; exact for separable signals with a
  /// built-in time factor, a sample max for tables.
  double sup_l2(double t) const;

  /// u(t, .) sampled on its own grid (zero signal gives an empty vector).
  std::vector<cplx> samples_at(double t) const;

  /// u(t, x) at an arbitrary point, linear between grid samples.
  cplx value(double t, double x) const;

  double horizon() const;

 private:
  Kind kind_ = signal::Zero{};
  std::string description_;
  double profile_norm_ = 0.0;  ///< ||profile||_{L^2} for separable signals
};

}  // namespace kvstring

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kvstring/modal_solver.hpp"

namespace kvstring {

inline constexpr double kDefaultGammaRelTol = 1e-7;
inline constexpr double kDefaultGuardBand = 1e-3;

/// kappa0 = min(beta pi^2 / 8, alpha / beta) when k0 >= 1, else alpha / beta.
double decay_rate(const StringParams& params);

struct GammaSum {
  double value = 0.0;          ///< square root of the summed series
  int tail_modes = 0;          ///< modes k = 0..tail_modes-1 summed explicitly
  double tail_estimate = 0.0;  ///< envelope remainder added to the squared sum
};

/// gamma^2 = sum_{k,eps} gamma_{k,eps}^2. Terms are summed explicitly up to at
/// least k = 10 max(k0, 100) and until four times the asymptotic envelope
/// 2/(alpha pi^2 k^2) + 2/(beta^2 pi^4 k^4), summed over the remaining k, falls
/// below rel_tol times the partial sum; that remainder is then added.
GammaSum gamma_sum(const StringParams& params, double rel_tol = kDefaultGammaRelTol);

/// gamma'^2 = sum_{k,eps} |Re lambda_{k,eps}| gamma_{k,eps}^2 with the envelope
/// 4/(beta pi^2 k^2) per k, same safety factor and stopping rule.
GammaSum gamma_prime_sum(const StringParams& params, double rel_tol = kDefaultGammaRelTol);

struct IssCertificate {
  double alpha = 0.0;
  double beta = 0.0;
  int k0 = 0;
  double kappa0 = 0.0;
  double riesz_c = 0.0;
  double gamma = 0.0;
  double gamma_prime = 0.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  int tail_modes = 0;
  double tail_estimate = 0.0;
  int tail_modes_prime = 0;
  double tail_estimate_prime = 0.0;
};

IssCertificate certificate(const StringParams& params, double rel_tol = kDefaultGammaRelTol);

/// C0 e^{-kappa0 t} ||X0|| + C1 ||d||_{C0([0,t])} + C2 ||u||_{C0([0,t];L2)}.
double iss_bound_uniform(const IssCertificate& cert, double x0_norm, double d_sup, double u_sup,
                         double t);

/// C0 e^{-kappa0 t} ||X0|| + C3 ||d||_{L2(0,t)} + C4 ||u||_{L2((0,t)x(0,1))}.
double iss_bound_l2(const IssCertificate& cert, double x0_norm, double d_l2, double u_l2,
                    double t);

struct Violation {
  std::size_t index = 0;
  double t = 0.0;
  std::string estimate;  ///< "uniform" or "l2"
  double norm = 0.0;
  double bound = 0.0;
};

struct VerificationReport {
  std::string scenario;
  IssCertificate cert;
  double worst_uniform_margin = 0.0;  ///< min over t of bound - norm
  double worst_l2_margin = 0.0;
  double worst_uniform_ratio = 0.0;  ///< max over t of norm / bound
  double worst_l2_ratio = 0.0;
  std::vector<double> times;
  std::vector<double> uniform_margins;
  std::vector<double> l2_margins;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks both estimates at every output time. A point counts as a violation
/// when the norm exceeds the bound by more than guard_band relative.
VerificationReport verify_trajectory(const Trajectory& traj, const IssCertificate& cert,
                                     std::string scenario = {},
                                     double guard_band = kDefaultGuardBand);

std::string certificate_to_json(const IssCertificate& cert, int indent = 2);
std::string report_to_json(const VerificationReport& report, bool with_series = false,
                           int indent = 2);

struct AsymptoticResult {
  double peak_norm = 0.0;
  double late_norm = 0.0;
  double ratio = 0.0;
};

/// late_norm = max norm over the final window_fraction of the horizon.
/// Throws HorizonTooShort when t_end < 3 / kappa0.
AsymptoticResult asymptotic_check(const Trajectory& traj, double window_fraction, double kappa0);

/// Least-squares slope of log(norm) against t over t >= from_fraction * t_end.
double fit_log_slope(const Trajectory& traj, double from_fraction = 0.5);

struct Scenario {
  std::string name;
  SimulationConfig config;
};

/// Reproducible random scenario: Assumption-valid (alpha, beta), band-limited
/// X0 = B d(0) + sum c Phi over k <= 6, built-in boundary and separable
/// distributed disturbances.
Scenario random_scenario(std::uint64_t seed, std::uint64_t index);

struct SuiteResult {
  std::vector<VerificationReport> reports;
  std::size_t violations = 0;
  std::size_t failures = 0;  ///< scenarios that threw
  std::vector<std::string> errors;
};

/// Simulates and verifies `count` random scenarios across `threads` workers.
/// Results are ordered by scenario index regardless of scheduling.
SuiteResult run_random_suite(std::uint64_t seed, std::size_t count, unsigned threads = 0,
                             double c1_scale = 1.0);

}  // namespace kvstring

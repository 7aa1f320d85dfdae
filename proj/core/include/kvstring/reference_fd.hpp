#pragma once

#include <vector>

#include "kvstring/modal_solver.hpp"

namespace kvstring {

struct FdConfig {
  std::size_t nx = 512;  ///< grid intervals, even and >= 32
  double dt = 1e-4;      ///< time step; must divide the output step
  bool store_states = false;
};

/// Finite-difference reference solution of the damped string.
///
/// Nodes x_j = j h carry y and v = y_t. The Kelvin-Voigt flux
/// F_{j+1/2} = (alpha (y_{j+1} - y_j) + beta (v_{j+1} - v_j)) / h is
/// differenced at interior nodes, the last node owns a half cell whose outer
/// flux is d(t), and y_0 = v_0 = 0. Time stepping is trapezoidal with y
/// eliminated, leaving one tridiagonal solve per step.
Trajectory simulate_fd(const SimulationConfig& config, const FdConfig& fd);

/// ||X(t_i)||_H^2 for every output time.
std::vector<double> energy_series(const Trajectory& traj);

}  // namespace kvstring

#include "kvstring/reference_fd.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kvstring/error.hpp"

namespace kvstring {

namespace {

// Linear interpolation of grid samples onto the FD nodes.
std::vector<cplx> to_nodes(const std::vector<cplx>& f, const UniformGrid& from,
                           const UniformGrid& to) {
  if (from == to) return f;
  const std::size_t n = from.intervals();
  std::vector<cplx> out(to.size());
  for (std::size_t j = 0; j < to.size(); ++j) {
    const double s = to.x(j) * static_cast<double>(n);
    const auto i = std::min(static_cast<std::size_t>(s), n - 1);
    const double frac = s - static_cast<double>(i);
    out[j] = (1.0 - frac) * f[i] + frac * f[i + 1];
  }
  return out;
}

// u(t, x_j) at the FD nodes with the spatial interpolation done once.
class NodeForcing {
 public:
  NodeForcing(const DistributedSignal& u, const UniformGrid& grid) : u_(&u) {
    if (const auto* s = std::get_if<signal::Separable>(&u.kind())) {
      profile_ = to_nodes(s->profile, s->grid, grid);
    } else if (const auto* tb = std::get_if<signal::Table>(&u.kind())) {
      for (const auto& row : tb->rows) rows_.push_back(to_nodes(row, tb->grid, grid));
    }
  }

  bool is_zero() const { return u_->is_zero(); }

  void at(double t, std::vector<cplx>& out) const {
    if (const auto* s = std::get_if<signal::Separable>(&u_->kind())) {
      const double g = s->time_factor.value(t);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] = g * profile_[j];
    } else if (const auto* tb = std::get_if<signal::Table>(&u_->kind())) {
      const auto& ts = tb->times;
      auto it = std::upper_bound(ts.begin(), ts.end(), t);
      std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
      i = std::min(i, ts.size() - 2);
      const double s = std::clamp((t - ts[i]) / (ts[i + 1] - ts[i]), 0.0, 1.0);
      for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = (1.0 - s) * rows_[i][j] + s * rows_[i + 1][j];
      }
    } else {
      std::fill(out.begin(), out.end(), cplx{});
    }
  }

 private:
  const DistributedSignal* u_;
  std::vector<cplx> profile_;
  std::vector<std::vector<cplx>> rows_;
};

// Unknowns are nodes 1..n stored at index j-1. L w is the discrete
// (w')' operator with w_0 = 0 and a zero outer flux on the half cell at x = 1.
void apply_l(const std::vector<cplx>& w, double inv_h2, std::vector<cplx>& out) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cplx left = i == 0 ? cplx{} : w[i - 1];
    out[i] = (left - 2.0 * w[i] + w[i + 1]) * inv_h2;
  }
  out[n - 1] = 2.0 * (w[n - 2] - w[n - 1]) * inv_h2;
}

// Thomas factorization of I - c L, reused every step.
class TridiagonalSolver {
 public:
  TridiagonalSolver(std::size_t n, double c, double inv_h2) : sub_(n), diag_(n), sup_(n) {
    const double off = -c * inv_h2;
    for (std::size_t i = 0; i < n; ++i) {
      diag_[i] = 1.0 + 2.0 * c * inv_h2;
      sub_[i] = i == 0 ? 0.0 : off;
      sup_[i] = i + 1 < n ? off : 0.0;
    }
    sub_[n - 1] = 2.0 * off;
    for (std::size_t i = 1; i < n; ++i) {
      const double m = sub_[i] / diag_[i - 1];
      diag_[i] -= m * sup_[i - 1];
      sub_[i] = m;
    }
    for (double p : diag_) {
      if (!(std::abs(p) > 1e-300) || !std::isfinite(p)) {
        throw Error(ErrorKind::StepUnstableOrSingular, "singular pivot in the implicit FD step");
      }
    }
  }

  void solve(std::vector<cplx>& rhs) const {
    const std::size_t n = rhs.size();
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= sub_[i] * rhs[i - 1];
    rhs[n - 1] /= diag_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup_[i] * rhs[i + 1]) / diag_[i];
  }

 private:
  std::vector<double> sub_, diag_, sup_;
};

StateVector to_state(const UniformGrid& grid, const std::vector<cplx>& y,
                     const std::vector<cplx>& v) {
  std::vector<cplx> y_full(grid.size()), v_full(grid.size());
  std::copy(y.begin(), y.end(), y_full.begin() + 1);
  std::copy(v.begin(), v.end(), v_full.begin() + 1);
  return {grid, differentiate(y_full, grid), std::move(v_full)};
}

}  // namespace

Trajectory simulate_fd(const SimulationConfig& cfg, const FdConfig& fd) {
  if (fd.nx < 32 || fd.nx % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("FD grid needs an even nx >= 32, got {}", fd.nx));
  }
  if (!(fd.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "FD time step must be positive");
  const double ratio = cfg.dt / fd.dt;
  const auto per_output = static_cast<std::size_t>(std::llround(ratio));
  if (per_output < 1 || std::abs(ratio - static_cast<double>(per_output)) > 1e-9 * ratio) {
    throw Error(ErrorKind::InvalidArgument, "FD step must divide the output step");
  }
  const StringParams& params = cfg.params;
  const cplx trace = boundary_trace(cfg.initial, params);
  if (std::abs(trace - cfg.d.value(0.0)) > cfg.compat_tol) {
    throw Error(ErrorKind::CompatibilityViolated,
                fmt::format("boundary trace of the initial state differs from d(0) by {:.3g}",
                            std::abs(trace - cfg.d.value(0.0))));
  }

  Trajectory traj;
  traj.solver = "fd";
  traj.times = output_times(cfg.t_end, cfg.dt);
  traj.initial_norm = h_norm(cfg.initial, params);

  const UniformGrid grid(fd.nx);
  const StateVector start = resample(cfg.initial, grid);
  const std::vector<cplx> y_full = start.x1();
  const std::size_t n = fd.nx;
  std::vector<cplx> y(y_full.begin() + 1, y_full.end());
  std::vector<cplx> v(start.x2().begin() + 1, start.x2().end());

  const double alpha = params.alpha();
  const double beta = params.beta();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double k = fd.dt;
  const double c = 0.5 * k * (beta + 0.5 * alpha * k);
  const TridiagonalSolver solver(n, c, inv_h2);

  const NodeForcing forcing(cfg.u, grid);
  std::vector<cplx> u_nodes(grid.size());
  auto load = [&](double t, std::vector<cplx>& g) {
    if (!forcing.is_zero()) {
      forcing.at(t, u_nodes);
      for (std::size_t j = 0; j < n; ++j) g[j] = u_nodes[j + 1];
    } else {
      std::fill(g.begin(), g.end(), cplx{});
    }
    g[n - 1] += 2.0 * cfg.d.value(t) / h;
  };

  std::vector<cplx> g_prev(n), g_next(n), w(n), lw(n), rhs(n);
  load(0.0, g_prev);

  auto record = [&](std::size_t i) {
    StateVector s = to_state(grid, y, v);
    traj.h_norms[i] = h_norm(s, params);
    if (fd.store_states) traj.states.push_back(std::move(s));
  };
  traj.h_norms.resize(traj.times.size());
  record(0);

  std::size_t step = 0;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    for (std::size_t s = 0; s < per_output; ++s) {
      ++step;
      const double t_next = s + 1 == per_output ? traj.times[i] : static_cast<double>(step) * k;
      load(t_next, g_next);
      for (std::size_t j = 0; j < n; ++j) w[j] = 2.0 * alpha * y[j] + (beta + 0.5 * alpha * k) * v[j];
      apply_l(w, inv_h2, lw);
      for (std::size_t j = 0; j < n; ++j) {
        rhs[j] = v[j] + 0.5 * k * (lw[j] + g_prev[j] + g_next[j]);
      }
      solver.solve(rhs);
      for (std::size_t j = 0; j < n; ++j) {
        y[j] += 0.5 * k * (v[j] + rhs[j]);
        v[j] = rhs[j];
      }
      std::swap(g_prev, g_next);
    }
    if (!std::isfinite(std::abs(v.back())) || !std::isfinite(std::abs(y.back()))) {
      throw Error(ErrorKind::StepUnstableOrSingular, "non-finite FD state");
    }
    record(i);
  }

  RunningNorms norms = running_norms(cfg.d, cfg.u, traj.times, cfg.substeps);
  traj.d_sup = std::move(norms.d_sup);
  traj.u_sup = std::move(norms.u_sup);
  traj.d_l2 = std::move(norms.d_l2);
  traj.u_l2 = std::move(norms.u_l2);
  return traj;
}

std::vector<double> energy_series(const Trajectory& traj) {
  std::vector<double> out(traj.h_norms.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = traj.h_norms[i] * traj.h_norms[i];
  return out;
}

}  // namespace kvstring

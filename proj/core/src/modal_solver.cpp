#include "kvstring/modal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "kvstring/error.hpp"

namespace kvstring {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this |z| the closed forms of phi_1 and phi_2 lose digits to cancellation.
constexpr double kSeriesRadius = 0.25;

constexpr double kFlushBelow = 1e-280;

// 3-point Gauss-Legendre nodes and weights on [0, 1].
constexpr double kGaussNodes[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr double kGaussWeights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

std::vector<cplx> sine_moments_of(const std::vector<cplx>& f, const UniformGrid& grid,
                                  int truncation) {
  const auto w = simpson_weights(grid);
  std::vector<cplx> out(static_cast<std::size_t>(truncation) + 1);
  for (int k = 0; k <= truncation; ++k) {
    const double wn = (k + 0.5) * kPi;
    cplx acc{};
    for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i] * std::sin(wn * grid.x(i));
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

// Squared L2(0,1) norm of u(t, .) for the running L2 integral.
double u_norm_sq(const DistributedSignal& u, double t) {
  const double n = u.l2_norm_at(t);
  return n * n;
}

}  // namespace

std::vector<double> output_times(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= dt)) {
    throw Error(ErrorKind::InvalidArgument, "need t_end >= dt > 0");
  }
  const double steps = t_end / dt;
  const auto m = static_cast<long>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(m)) > 1e-9 * steps) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("t_end = {} is not a whole number of output steps dt = {}", t_end, dt));
  }
  std::vector<double> times(static_cast<std::size_t>(m) + 1);
  for (long i = 0; i <= m; ++i) times[static_cast<std::size_t>(i)] = static_cast<double>(i) * dt;
  times.back() = t_end;
  return times;
}

RunningNorms running_norms(const BoundarySignal& d, const DistributedSignal& u,
                           std::span<const double> times, int substeps) {
  if (substeps < 1) throw Error(ErrorKind::InvalidArgument, "substeps must be >= 1");
  RunningNorms r;
  const std::size_t n = times.size();
  r.d_sup.resize(n);
  r.u_sup.resize(n);
  r.d_l2.resize(n);
  r.u_l2.resize(n);
  if (n == 0) return r;

  double d_max = std::abs(d.value(times[0]));
  double u_max = u.l2_norm_at(times[0]);
  double d_int = 0.0, u_int = 0.0;
  const bool with_u = !u.is_zero();
  const bool with_d = !d.is_zero();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double t0 = times[i - 1];
      const double h = (times[i] - t0) / substeps;
      for (int s = 0; s < substeps; ++s) {
        const double a = t0 + s * h;
        for (int g = 0; g < 3; ++g) {
          const double t = a + kGaussNodes[g] * h;
          if (with_d) {
            const double v = d.value(t);
            d_int += kGaussWeights[g] * h * v * v;
          }
          if (with_u) u_int += kGaussWeights[g] * h * u_norm_sq(u, t);
        }
        const double b = s + 1 == substeps ? times[i] : a + h;
        if (with_d) d_max = std::max(d_max, std::abs(d.value(b)));
        if (with_u) u_max = std::max(u_max, u.l2_norm_at(b));
      }
    }
    r.d_sup[i] = std::max(d_max, d.sup_abs(times[i]));
    r.u_sup[i] = std::max(u_max, u.sup_l2(times[i]));
    r.d_l2[i] = std::sqrt(d_int);
    r.u_l2[i] = std::sqrt(u_int);
  }
  return r;
}

SineMoments::SineMoments(const DistributedSignal& u, int truncation) : u_(&u) {
  if (const auto* s = std::get_if<signal::Separable>(&u.kind())) {
    kind_ = Kind::separable;
    profile_moments_ = sine_moments_of(s->profile, s->grid, truncation);
  } else if (const auto* tb = std::get_if<signal::Table>(&u.kind())) {
    kind_ = Kind::table;
    times_ = tb->times;
    row_moments_.reserve(tb->rows.size());
    for (const auto& row : tb->rows) row_moments_.push_back(sine_moments_of(row, tb->grid, truncation));
  }
}

void SineMoments::at(double t, std::vector<cplx>& out) const {
  switch (kind_) {
    case Kind::zero:
      std::fill(out.begin(), out.end(), cplx{});
      return;
    case Kind::separable: {
      const auto& s = std::get<signal::Separable>(u_->kind());
      const double g = s.time_factor.value(t);
      out.resize(profile_moments_.size());
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = g * profile_moments_[k];
      return;
    }
    case Kind::table: {
      if (t < times_.front() - 1e-12 || t > times_.back() + 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "table signal queried outside its time range");
      }
      auto it = std::upper_bound(times_.begin(), times_.end(), t);
      std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
      i = std::min(i, times_.size() - 2);
      const double s = std::clamp((t - times_[i]) / (times_[i + 1] - times_[i]), 0.0, 1.0);
      out.resize(row_moments_[i].size());
      for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = (1.0 - s) * row_moments_[i][k] + s * row_moments_[i + 1][k];
      }
      return;
    }
  }
}

std::vector<cplx> modal_forcing(const StringParams& params, const ModeData& mode,
                                const BoundarySignal& d, const DistributedSignal& u,
                                std::span<const double> times) {
  (void)params;
  const int k = mode.index.k;
  // conj(Psi^2(x)) = sin(k~ pi x) / pairing.
  const cplx scale = 1.0 / mode.pairing;
  const double end_sign = (k % 2 == 0) ? 1.0 : -1.0;
  const SineMoments moments(u, k);
  std::vector<cplx> m(static_cast<std::size_t>(k) + 1);
  std::vector<cplx> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    cplx f = end_sign * d.value(times[i]);
    if (!moments.is_zero()) {
      moments.at(times[i], m);
      f += m[static_cast<std::size_t>(k)];
    }
    out[i] = scale * f;
  }
  return out;
}

cplx phi1(cplx z) {
  if (std::abs(z) >= kSeriesRadius) return (std::exp(z) - 1.0) / z;
  // sum z^j / (j+1)!
  cplx term = 1.0, sum = 1.0;
  for (int j = 1; j < 20; ++j) {
    term *= z / static_cast<double>(j + 1);
    sum += term;
  }
  return sum;
}

cplx phi2(cplx z) {
  if (std::abs(z) >= kSeriesRadius) return (std::exp(z) - 1.0 - z) / (z * z);
  // sum z^j / (j+2)!
  cplx term = 0.5, sum = 0.5;
  for (int j = 1; j < 20; ++j) {
    term *= z / static_cast<double>(j + 2);
    sum += term;
  }
  return sum;
}

ModeStepper::ModeStepper(cplx lambda, double step) {
  const cplx z = lambda * step;
  const cplx p1 = phi1(z);
  const cplx p2 = phi2(z);
  growth_ = std::exp(z);
  w0_ = step * (p1 - p2);
  w1_ = step * p2;
}

std::vector<cplx> integrate_mode(cplx lambda, cplx c0, std::span<const cplx> forcing, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  std::vector<cplx> out;
  out.reserve(std::max<std::size_t>(forcing.size(), 1));
  out.push_back(c0);
  const ModeStepper stepper(lambda, step);
  for (std::size_t i = 1; i < forcing.size(); ++i) {
    out.push_back(stepper.advance(out.back(), forcing[i - 1], forcing[i]));
  }
  return out;
}

double truncation_bound(const StringParams& params, int truncation, double d_sup, double u_sup,
                        double initial_tail) {
  if (truncation < 1) throw Error(ErrorKind::InvalidArgument, "truncation must be >= 1");
  const double a = params.alpha();
  const double b = params.beta();
  const double pi2 = kPi * kPi;
  // Sum over k > N of 4 (2/(alpha pi^2 k^2) + 2/(beta^2 pi^4 k^4)), bounded by
  // the integral from N: sum_{k>N} 1/k^p <= 1/((p-1) N^(p-1)).
  const double n = truncation;
  const double tail_sq = 4.0 * (2.0 / (a * pi2 * n) + 2.0 / (3.0 * b * b * pi2 * pi2 * n * n * n));
  return std::sqrt(tail_sq) * (d_sup + u_sup) + initial_tail;
}

double initial_tail_norm(const StateVector& initial, const ModalBasis& basis,
                         const CoefficientSet& coeffs) {
  const double full = h_norm(initial, basis.params());
  const double kept = basis.gram_norm_squared(coeffs.values);
  return std::sqrt(std::max(0.0, full * full - kept));
}

bool check_compatibility(const StateVector& initial, const BoundarySignal& d,
                         const StringParams& params, double tol) {
  return std::abs(boundary_trace(initial, params) - d.value(0.0)) <= tol;
}

Trajectory simulate_spectral(const SimulationConfig& cfg) {
  if (cfg.truncation < 0) throw Error(ErrorKind::InvalidArgument, "truncation must be >= 0");
  if (cfg.substeps < 1) throw Error(ErrorKind::InvalidArgument, "substeps must be >= 1");
  const StringParams& params = cfg.params;
  const cplx trace = boundary_trace(cfg.initial, params);
  if (std::abs(trace - cfg.d.value(0.0)) > cfg.compat_tol) {
    throw Error(ErrorKind::CompatibilityViolated,
                fmt::format("boundary trace of the initial state {:.6g}{:+.6g}i differs from "
                            "d(0) = {:.6g} by more than {:.3g}",
                            trace.real(), trace.imag(), cfg.d.value(0.0), cfg.compat_tol));
  }
  const double horizon = std::min(cfg.d.horizon(), cfg.u.horizon());
  if (cfg.t_end > horizon + 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "disturbance signal does not cover [0, t_end]");
  }

  Trajectory traj;
  traj.solver = "spectral";
  traj.times = output_times(cfg.t_end, cfg.dt);
  const std::size_t n_out = traj.times.size();

  const ModalBasis basis(params, cfg.truncation);
  const CoefficientSet c0 = project(cfg.initial, basis);
  traj.initial_norm = h_norm(cfg.initial, params);

  RunningNorms norms = running_norms(cfg.d, cfg.u, traj.times, cfg.substeps);
  traj.truncation_bound =
      truncation_bound(params, std::max(cfg.truncation, 1), norms.d_sup.back(), norms.u_sup.back(),
                       initial_tail_norm(cfg.initial, basis, c0));
  const double scale = traj.initial_norm + norms.d_sup.back() + norms.u_sup.back();
  if (cfg.truncation_rel_tol > 0.0 && traj.truncation_bound > cfg.truncation_rel_tol * scale) {
    throw Error(ErrorKind::TruncationInsufficient,
                fmt::format("tail estimate {:.3g} exceeds {:.3g} x {:.3g} at truncation {}",
                            traj.truncation_bound, cfg.truncation_rel_tol, scale, cfg.truncation));
  }

  // Time-major sweep: d and the sine moments of u are evaluated once per
  // substep and shared by every mode.
  const std::size_t steps = (n_out - 1) * static_cast<std::size_t>(cfg.substeps);
  const double h = cfg.dt / cfg.substeps;
  const SineMoments moments(cfg.u, cfg.truncation);
  const std::size_t n_modes = basis.size();
  std::vector<ModeStepper> steppers;
  std::vector<cplx> scale_f(n_modes);
  std::vector<double> end_sign(n_modes);
  steppers.reserve(n_modes);
  for (std::size_t flat = 0; flat < n_modes; ++flat) {
    const ModeData& mode = basis.mode(flat);
    steppers.emplace_back(mode.lambda, h);
    scale_f[flat] = 1.0 / mode.pairing;
    end_sign[flat] = mode.index.k % 2 == 0 ? 1.0 : -1.0;
  }
  std::vector<cplx> m(static_cast<std::size_t>(cfg.truncation) + 1);
  auto sample_forcing = [&](double t, std::vector<cplx>& f) {
    const double dv = cfg.d.value(t);
    if (!moments.is_zero()) moments.at(t, m);
    for (std::size_t flat = 0; flat < n_modes; ++flat) {
      cplx v = end_sign[flat] * dv;
      if (!moments.is_zero()) v += m[flat / 2];
      f[flat] = {scale_f[flat].real() * v.real() - scale_f[flat].imag() * v.imag(),
                 scale_f[flat].real() * v.imag() + scale_f[flat].imag() * v.real()};
    }
  };

  traj.coefficients.assign(n_out, CoefficientSet::zeros(cfg.truncation));
  std::vector<cplx> c = c0.values;
  std::vector<cplx> f_prev(n_modes), f_next(n_modes);
  sample_forcing(0.0, f_prev);
  traj.coefficients[0].values = c;
  for (std::size_t j = 1; j <= steps; ++j) {
    const std::size_t out_i = j / static_cast<std::size_t>(cfg.substeps);
    const bool at_output = j % static_cast<std::size_t>(cfg.substeps) == 0;
    sample_forcing(at_output ? traj.times[out_i] : static_cast<double>(j) * h, f_next);
    for (std::size_t flat = 0; flat < n_modes; ++flat) {
      cplx v = steppers[flat].advance(c[flat], f_prev[flat], f_next[flat]);
      // Decayed fast modes would otherwise sink into subnormals and stall the loop.
      if (std::abs(v.real()) < kFlushBelow) v.real(0.0);
      if (std::abs(v.imag()) < kFlushBelow) v.imag(0.0);
      c[flat] = v;
    }
    std::swap(f_prev, f_next);
    if (at_output) traj.coefficients[out_i].values = c;
  }

  traj.h_norms.resize(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    traj.h_norms[i] = std::sqrt(std::max(0.0, basis.gram_norm_squared(traj.coefficients[i].values)));
  }
  traj.d_sup = std::move(norms.d_sup);
  traj.u_sup = std::move(norms.u_sup);
  traj.d_l2 = std::move(norms.d_l2);
  traj.u_l2 = std::move(norms.u_l2);

  if (cfg.store_states) {
    const UniformGrid grid = cfg.state_grid.value_or(cfg.initial.grid());
    traj.states.reserve(n_out);
    for (const auto& c : traj.coefficients) traj.states.push_back(reconstruct(c, basis, grid));
  }
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool with_coefficients) {
  const bool coeffs = with_coefficients && !traj.coefficients.empty();
  os << "t,norm_H,d_sup,u_sup,d_l2,u_l2";
  if (coeffs) {
    for (std::size_t f = 0; f < traj.coefficients.front().size(); ++f) {
      const ModeIndex m = ModeIndex::from_flat(static_cast<int>(f));
      const char tag = m.eps > 0 ? 'p' : 'm';
      os << fmt::format(",c_{}_{}_re,c_{}_{}_im", m.k, tag, m.k, tag);
    }
  }
  os << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", traj.times[i],
                      traj.h_norms[i], traj.d_sup[i], traj.u_sup[i], traj.d_l2[i], traj.u_l2[i]);
    if (coeffs) {
      for (const cplx& c : traj.coefficients[i].values) {
        os << fmt::format(",{:.17g},{:.17g}", c.real(), c.imag());
      }
    }
    os << '\n';
  }
}

}  // namespace kvstring

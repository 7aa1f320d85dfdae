#include "kvstring/iss.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "kvstring/error.hpp"

namespace kvstring {

namespace {

constexpr double kPi = std::numbers::pi;

// Explicit sum of term(k) (both eps) until the remainder envelope
// sum_{j>K} tail_per_k(j) <= rel_tol * partial, then the envelope is added.
template <class Term, class Tail>
GammaSum summed(const StringParams& params, double rel_tol, Term term, Tail tail_after) {
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");
  const int min_modes = 10 * std::max(params.k0(), 100);
  // Kahan summation keeps millions of small terms from drifting.
  double sum = 0.0, comp = 0.0;
  int k = 0;
  for (;; ++k) {
    if (k >= min_modes && tail_after(k - 1) <= rel_tol * sum) break;
    if (k == std::numeric_limits<int>::max() - 1) break;
    const double y = term(k) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  GammaSum out;
  out.tail_modes = k;
  out.tail_estimate = tail_after(k - 1);
  out.value = std::sqrt(sum + out.tail_estimate);
  return out;
}

struct RealPair {
  double fast, slow;  // lambda_{k,-1} and lambda_{k,+1}
  double g2_fast, g2_slow;  // gamma^2 of each
};

// Overdamped pair in real arithmetic: with real roots, Re(lambda) (1 - partner/lambda)
// reduces to lambda - partner, so gamma = 2 ||phi|| / |fast - slow|.
RealPair real_pair(const StringParams& params, int k) {
  RealPair r;
  r.fast = eigenvalue(params, ModeIndex(k, -1)).real();
  const double kt = k + 0.5;
  const double stiffness = kt * kt * params.alpha() * kPi * kPi;
  r.slow = stiffness / r.fast;
  const double gap2 = (r.fast - r.slow) * (r.fast - r.slow);
  r.g2_fast = 2.0 * (1.0 + stiffness / (r.fast * r.fast)) / gap2;
  r.g2_slow = 2.0 * (1.0 + stiffness / (r.slow * r.slow)) / gap2;
  return r;
}

}  // namespace

double decay_rate(const StringParams& params) {
  const double real_limit = params.alpha() / params.beta();
  if (params.k0() >= 1) return std::min(params.beta() * kPi * kPi / 8.0, real_limit);
  return real_limit;
}

GammaSum gamma_sum(const StringParams& params, double rel_tol) {
  const double a = params.alpha();
  const double b = params.beta();
  const double pi2 = kPi * kPi;
  auto term = [&](int k) {
    if (k >= params.k0()) {
      const RealPair r = real_pair(params, k);
      return r.g2_fast + r.g2_slow;
    }
    const double gm = mode_data(params, ModeIndex(k, -1)).gamma;
    const double gp = mode_data(params, ModeIndex(k, +1)).gamma;
    return gm * gm + gp * gp;
  };
  // 4 * sum_{j>K} (2/(a pi^2 j^2) + 2/(b^2 pi^4 j^4)) <= 4 (2/(a pi^2 K) + 2/(3 b^2 pi^4 K^3)).
  auto tail = [&](int last) {
    const double n = std::max(last, 1);
    return 4.0 * (2.0 / (a * pi2 * n) + 2.0 / (3.0 * b * b * pi2 * pi2 * n * n * n));
  };
  return summed(params, rel_tol, term, tail);
}

GammaSum gamma_prime_sum(const StringParams& params, double rel_tol) {
  const double b = params.beta();
  const double pi2 = kPi * kPi;
  auto term = [&](int k) {
    if (k >= params.k0()) {
      const RealPair r = real_pair(params, k);
      return -r.fast * r.g2_fast - r.slow * r.g2_slow;
    }
    double s = 0.0;
    for (int eps : {-1, 1}) {
      const ModeData m = mode_data(params, ModeIndex(k, eps));
      s += std::abs(m.lambda.real()) * m.gamma * m.gamma;
    }
    return s;
  };
  auto tail = [&](int last) { return 4.0 * 4.0 / (b * pi2 * std::max(last, 1)); };
  return summed(params, rel_tol, term, tail);
}

IssCertificate certificate(const StringParams& params, double rel_tol) {
  IssCertificate c;
  c.alpha = params.alpha();
  c.beta = params.beta();
  c.k0 = params.k0();
  c.kappa0 = decay_rate(params);
  c.riesz_c = riesz_constant(params);
  const GammaSum g = gamma_sum(params, rel_tol);
  const GammaSum gp = gamma_prime_sum(params, rel_tol);
  c.gamma = g.value;
  c.gamma_prime = gp.value;
  c.tail_modes = g.tail_modes;
  c.tail_estimate = g.tail_estimate;
  c.tail_modes_prime = gp.tail_modes;
  c.tail_estimate_prime = gp.tail_estimate;
  const double M = 1.0 + c.riesz_c;
  const double m = 1.0 - c.riesz_c;
  c.c0 = std::sqrt(3.0 * M / m);
  c.c1 = c.gamma * std::sqrt(3.0 * M);
  c.c2 = c.gamma * std::sqrt(1.5 * M);
  c.c3 = c.gamma_prime * std::sqrt(1.5 * M);
  c.c4 = 0.5 * c.gamma_prime * std::sqrt(3.0 * M);
  return c;
}

double iss_bound_uniform(const IssCertificate& cert, double x0_norm, double d_sup, double u_sup,
                         double t) {
  return cert.c0 * std::exp(-cert.kappa0 * t) * x0_norm + cert.c1 * d_sup + cert.c2 * u_sup;
}

double iss_bound_l2(const IssCertificate& cert, double x0_norm, double d_l2, double u_l2,
                    double t) {
  return cert.c0 * std::exp(-cert.kappa0 * t) * x0_norm + cert.c3 * d_l2 + cert.c4 * u_l2;
}

VerificationReport verify_trajectory(const Trajectory& traj, const IssCertificate& cert,
                                     std::string scenario, double guard_band) {
  VerificationReport r;
  r.scenario = std::move(scenario);
  r.cert = cert;
  r.times = traj.times;
  const std::size_t n = traj.times.size();
  r.uniform_margins.resize(n);
  r.l2_margins.resize(n);
  r.worst_uniform_margin = std::numeric_limits<double>::infinity();
  r.worst_l2_margin = std::numeric_limits<double>::infinity();
  const double x0 = traj.initial_norm;
  auto ratio = [](double norm, double bound) {
    if (bound > 0.0) return norm / bound;
    return norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.times[i];
    const double norm = traj.h_norms[i];
    const double bu = iss_bound_uniform(cert, x0, traj.d_sup[i], traj.u_sup[i], t);
    const double bl = iss_bound_l2(cert, x0, traj.d_l2[i], traj.u_l2[i], t);
    r.uniform_margins[i] = bu - norm;
    r.l2_margins[i] = bl - norm;
    r.worst_uniform_margin = std::min(r.worst_uniform_margin, bu - norm);
    r.worst_l2_margin = std::min(r.worst_l2_margin, bl - norm);
    r.worst_uniform_ratio = std::max(r.worst_uniform_ratio, ratio(norm, bu));
    r.worst_l2_ratio = std::max(r.worst_l2_ratio, ratio(norm, bl));
    if (norm > bu * (1.0 + guard_band)) r.violations.push_back({i, t, "uniform", norm, bu});
    if (norm > bl * (1.0 + guard_band)) r.violations.push_back({i, t, "l2", norm, bl});
  }
  if (n == 0) r.worst_uniform_margin = r.worst_l2_margin = 0.0;
  return r;
}

namespace {

nlohmann::ordered_json cert_json(const IssCertificate& c) {
  nlohmann::ordered_json j;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["k0"] = c.k0;
  j["kappa0"] = c.kappa0;
  j["riesz_c"] = c.riesz_c;
  j["gamma"] = c.gamma;
  j["gamma_prime"] = c.gamma_prime;
  j["c0"] = c.c0;
  j["c1"] = c.c1;
  j["c2"] = c.c2;
  j["c3"] = c.c3;
  j["c4"] = c.c4;
  j["tail_modes"] = c.tail_modes;
  j["tail_estimate"] = c.tail_estimate;
  j["tail_modes_prime"] = c.tail_modes_prime;
  j["tail_estimate_prime"] = c.tail_estimate_prime;
  return j;
}

}  // namespace

std::string certificate_to_json(const IssCertificate& cert, int indent) {
  return cert_json(cert).dump(indent);
}

std::string report_to_json(const VerificationReport& report, bool with_series, int indent) {
  nlohmann::ordered_json j;
  j["scenario"] = report.scenario;
  j["cert"] = cert_json(report.cert);
  j["worst_uniform_margin"] = report.worst_uniform_margin;
  j["worst_l2_margin"] = report.worst_l2_margin;
  j["worst_uniform_ratio"] = report.worst_uniform_ratio;
  j["worst_l2_ratio"] = report.worst_l2_ratio;
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    violations.push_back(
        {{"index", v.index}, {"t", v.t}, {"estimate", v.estimate}, {"norm", v.norm}, {"bound", v.bound}});
  }
  j["violations"] = violations;
  if (with_series) {
    j["times"] = report.times;
    j["uniform_margins"] = report.uniform_margins;
    j["l2_margins"] = report.l2_margins;
  }
  return j.dump(indent);
}

AsymptoticResult asymptotic_check(const Trajectory& traj, double window_fraction, double kappa0) {
  if (traj.times.empty()) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "window_fraction must lie in (0, 1]");
  }
  const double t_end = traj.times.back();
  if (t_end < 3.0 / kappa0) {
    throw Error(ErrorKind::HorizonTooShort,
                fmt::format("horizon {:.4g} is shorter than 3/kappa0 = {:.4g}", t_end, 3.0 / kappa0));
  }
  AsymptoticResult r;
  const double start = (1.0 - window_fraction) * t_end;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    r.peak_norm = std::max(r.peak_norm, traj.h_norms[i]);
    if (traj.times[i] >= start) r.late_norm = std::max(r.late_norm, traj.h_norms[i]);
  }
  r.ratio = r.peak_norm > 0.0 ? r.late_norm / r.peak_norm : 0.0;
  return r;
}

double fit_log_slope(const Trajectory& traj, double from_fraction) {
  const double start = from_fraction * traj.times.back();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < start || !(traj.h_norms[i] > 0.0)) continue;
    const double x = traj.times[i];
    const double y = std::log(traj.h_norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "not enough positive samples for a slope fit");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

namespace {

BoundarySignal random_boundary(std::mt19937_64& rng, double t_end, bool allow_zero) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto amp = [&] { return (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 1.3 * unit(rng)); };
  const int kind = static_cast<int>(unit(rng) * (allow_zero ? 4.0 : 3.0)) + (allow_zero ? 0 : 1);
  switch (kind) {
    case 0:
      return BoundarySignal::zero();
    case 1:
      return {signal::Sine{amp(), 0.2 + 9.8 * unit(rng), 2.0 * kPi * unit(rng)}, "sine"};
    case 2:
      return {signal::DecayingExp{amp(), 2.0 * unit(rng)}, "decaying_exp"};
    default: {
      const double t0 = unit(rng) * t_end / 3.0;
      return {signal::PolyPulse{t0, t0 + 0.2 + 2.8 * unit(rng), amp()}, "poly_pulse"};
    }
  }
}

}  // namespace

Scenario random_scenario(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Parameters well inside the Assumption-valid region.
  double alpha = 1.0, beta = 1.0;
  for (;;) {
    alpha = std::exp(std::log(0.5) + unit(rng) * std::log(8.0));
    beta = std::exp(std::log(0.3) + unit(rng) * std::log(2.0 / 0.3));
    try {
      (void)validate_params(alpha, beta, 1e-3);
      break;
    } catch (const Error&) {
    }
  }
  const StringParams params = validate_params(alpha, beta);
  const double kappa0 = decay_rate(params);
  const double dt = 0.02;
  const double t_end = dt * std::round(std::min(8.0 / kappa0, 20.0) / dt);

  BoundarySignal d = random_boundary(rng, t_end, true);

  DistributedSignal u;
  if (unit(rng) < 0.5) {
    const UniformGrid pgrid(256);
    const double b0 = normal(rng), b1 = normal(rng), b2 = normal(rng);
    const double phase = 2.0 * kPi * unit(rng);
    std::vector<cplx> profile(pgrid.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const double x = pgrid.x(i);
      profile[i] = (b0 + b1 * x + b2 * std::sin(3.0 * x)) * std::polar(1.0, phase * x);
    }
    u = DistributedSignal(
        signal::Separable{pgrid, std::move(profile), random_boundary(rng, t_end, false)},
        "separable");
  }

  const UniformGrid grid(1024);
  StateVector initial = lift_boundary(d.value(0.0), params, grid);
  const int kx = static_cast<int>(unit(rng) * 7.0);
  for (int k = 0; k <= kx; ++k) {
    for (int eps : {-1, 1}) {
      const double s = 1.0 / (1.0 + k);
      const cplx c{s * normal(rng), s * normal(rng)};
      initial += c * eigenstate(params, ModeIndex(k, eps), grid);
    }
  }

  SimulationConfig cfg(params, std::move(initial));
  cfg.d = std::move(d);
  cfg.u = std::move(u);
  cfg.t_end = t_end;
  cfg.dt = dt;
  return {fmt::format("random-{}-{}", seed, index), std::move(cfg)};
}

SuiteResult run_random_suite(std::uint64_t seed, std::size_t count, unsigned threads,
                             double c1_scale) {
  SuiteResult out;
  out.reports.resize(count);
  std::vector<std::string> errors(count);
  std::vector<char> failed(count, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        const Scenario sc = random_scenario(seed, i);
        IssCertificate cert = certificate(sc.config.params, 1e-6);
        cert.c1 *= c1_scale;
        const Trajectory traj = simulate_spectral(sc.config);
        out.reports[i] = verify_trajectory(traj, cert, sc.name);
      } catch (const std::exception& e) {
        failed[i] = 1;
        errors[i] = fmt::format("scenario {}: {}", i, e.what());
      }
    }
  };
  unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < count; ++i) {
    if (failed[i]) {
      ++out.failures;
      out.errors.push_back(errors[i]);
    } else {
      out.violations += out.reports[i].violations.size();
    }
  }
  return out;
}

}  // namespace kvstring

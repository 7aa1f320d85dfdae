#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kvstring/error.hpp"
#include "kvstring/iss.hpp"
#include "oracles.hpp"

using namespace kvstring;

namespace {

constexpr double kPi = std::numbers::pi;

const std::pair<double, double> kSweep[] = {{1.0, 2.0}, {1.0, 1.0}, {4.0, 1.0}, {0.5, 0.1}, {4.0, 2.0}};

Trajectory decay_trajectory(const StringParams& p, ModeIndex m, double t_end, double dt = 0.05) {
  SimulationConfig cfg(p, eigenstate(p, m, UniformGrid(2048)));
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.truncation = std::max(m.k, 4);
  cfg.substeps = 1;
  return simulate_spectral(cfg);
}

}  // namespace

TEST(DecayRate, Examples) {
  EXPECT_DOUBLE_EQ(decay_rate(validate_params(1.0, 2.0)), 0.5);
  EXPECT_DOUBLE_EQ(decay_rate(validate_params(1.0, 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(decay_rate(validate_params(4.0, 1.0)), kPi * kPi / 8.0);
  for (const auto& [a, b] : kSweep) {
    const StringParams p = validate_params(a, b);
    // No eigenvalue lies to the right of -kappa0.
    for (int k = 0; k <= 400; ++k) {
      for (int eps : {-1, 1}) {
        EXPECT_LE(static_cast<double>(oracle::eigenvalue(a, b, k, eps).real()), -decay_rate(p) * (1 - 1e-12));
      }
    }
  }
}

TEST(GammaSums, MatchBruteForce) {
  // Brute force to k = 1e6 in long double.
  const oracle::GainSums brute = oracle::brute_force_gains(1.0L, 2.0L, 1000000);
  const StringParams p = validate_params(1.0, 2.0);
  const GammaSum g = gamma_sum(p, 1e-8);
  const GammaSum gp = gamma_prime_sum(p, 1e-8);
  EXPECT_NEAR(g.value, static_cast<double>(brute.gamma), 1e-6 * g.value);
  EXPECT_NEAR(gp.value, static_cast<double>(brute.gamma_prime), 1e-6 * gp.value);
  EXPECT_GE(g.tail_modes, 1000);
  EXPECT_GT(g.tail_estimate, 0.0);
  EXPECT_GE(gp.tail_modes, 1000);
}

TEST(GammaSums, DominantTermsAndToleranceStability) {
  for (const auto& [a, b] : kSweep) {
    const StringParams p = validate_params(a, b);
    const oracle::ModeOracle m0 = oracle::mode(a, b, 0, 1), m1 = oracle::mode(a, b, 0, -1);
    const double lead = static_cast<double>(m0.gamma * m0.gamma + m1.gamma * m1.gamma);
    const double lead_p = static_cast<double>(std::abs(m0.lambda.real()) * m0.gamma * m0.gamma +
                                              std::abs(m1.lambda.real()) * m1.gamma * m1.gamma);
    for (double tol : {1e-7, 1e-6}) {
      const double g = gamma_sum(p, tol).value;
      const double gp = gamma_prime_sum(p, tol).value;
      EXPECT_GE(g * g, lead);
      EXPECT_GE(gp * gp, lead_p);
      EXPECT_LE(std::abs(gamma_sum(p, 2 * tol).value - g), tol * g);
      EXPECT_LE(std::abs(gamma_prime_sum(p, 2 * tol).value - gp), tol * gp);
    }
  }
}

TEST(Certificate, FormulaIdentities) {
  for (const auto& [a, b] : kSweep) {
    const StringParams p = validate_params(a, b);
    const IssCertificate c = certificate(p);
    const double C = riesz_constant(p);
    const double M = 1 + C, m = 1 - C;
    EXPECT_EQ(c.k0, p.k0());
    EXPECT_NEAR(c.c0, std::sqrt(3 * M / m), 1e-12 * c.c0);
    EXPECT_NEAR(c.c1, c.gamma * std::sqrt(3 * M), 1e-12 * c.c1);
    EXPECT_NEAR(c.c2, c.gamma * std::sqrt(3 * M / 2), 1e-12 * c.c2);
    EXPECT_NEAR(c.c3, c.gamma_prime * std::sqrt(3 * M / 2), 1e-12 * c.c3);
    EXPECT_NEAR(c.c4, c.gamma_prime / 2 * std::sqrt(3 * M), 1e-12 * c.c4);
    EXPECT_NEAR(c.c1 / c.c2, std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(c.c4 / c.c3, 1 / std::sqrt(2.0), 1e-14);
    EXPECT_DOUBLE_EQ(c.kappa0, decay_rate(p));
  }
  const IssCertificate c = certificate(validate_params(1.0, 2.0));
  EXPECT_NEAR(c.riesz_c, 2.0 / kPi, 1e-15);
  EXPECT_NEAR(c.c0, std::sqrt(3 * (1 + 2 / kPi) / (1 - 2 / kPi)), 1e-14);
  EXPECT_NEAR(c.c0, 3.6758169654247819, 1e-14);
}

TEST(Bounds, ExamplesAndMonotonicity) {
  const IssCertificate c = certificate(validate_params(1.0, 2.0));
  EXPECT_EQ(iss_bound_uniform(c, 0, 0, 0, 3.0), 0.0);
  EXPECT_EQ(iss_bound_l2(c, 0, 0, 0, 3.0), 0.0);
  EXPECT_LT(iss_bound_uniform(c, 1, 0, 0, 60.0), 1e-12);
  EXPECT_NEAR(iss_bound_uniform(c, 1, 0, 0, 2.0) / iss_bound_uniform(c, 1, 0, 0, 1.0), std::exp(-0.5), 1e-14);
  const oracle::GainSums brute = oracle::brute_force_gains(1.0L, 2.0L, 200000);
  const double c1_oracle = static_cast<double>(brute.gamma) * std::sqrt(3 * (1 + 2 / kPi));
  EXPECT_NEAR(iss_bound_uniform(c, 0, 1, 0, 5.0), c1_oracle, 1e-5 * c1_oracle);
  const double c3_oracle = static_cast<double>(brute.gamma_prime) * std::sqrt(1.5 * (1 + 2 / kPi));
  EXPECT_NEAR(iss_bound_l2(c, 0, 1, 0, 5.0), c3_oracle, 1e-4 * c3_oracle);
  for (auto bound : {iss_bound_uniform, iss_bound_l2}) {
    const double base = bound(c, 1.0, 0.5, 0.5, 1.0);
    EXPECT_GT(bound(c, 1.1, 0.5, 0.5, 1.0), base);
    EXPECT_GT(bound(c, 1.0, 0.6, 0.5, 1.0), base);
    EXPECT_GT(bound(c, 1.0, 0.5, 0.6, 1.0), base);
    EXPECT_LT(bound(c, 1.0, 0.5, 0.5, 1.1), base);
  }
}

TEST(Verify, EigenmodeInitialRatio) {
  const StringParams p = validate_params(1.0, 2.0);
  const Trajectory traj = decay_trajectory(p, {0, 1}, 4.0);
  const VerificationReport r = verify_trajectory(traj, certificate(p), "eigenmode");
  EXPECT_TRUE(r.ok());
  EXPECT_NEAR(traj.h_norms[0] / iss_bound_uniform(r.cert, traj.initial_norm, 0, 0, 0), 0.27204836622882249, 1e-6);
  EXPECT_NEAR(r.worst_uniform_ratio, 1 / r.cert.c0, 1e-6);
  EXPECT_EQ(r.uniform_margins.size(), traj.times.size());
}

TEST(Verify, ZeroTrajectoryAndDetection) {
  const StringParams p = validate_params(1.0, 1.0);
  SimulationConfig cfg(p, StateVector::zero(UniformGrid(64)));
  const Trajectory traj = simulate_spectral(cfg);
  const IssCertificate cert = certificate(p);
  const VerificationReport r = verify_trajectory(traj, cert);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.worst_uniform_margin, 0.0);
  EXPECT_EQ(r.worst_l2_margin, 0.0);

  // A deliberately shrunk certificate must be flagged.
  Trajectory t2 = decay_trajectory(p, {0, 1}, 3.0);
  IssCertificate weak = cert;
  weak.c0 = 0.5;
  const VerificationReport bad = verify_trajectory(t2, weak, "weak");
  EXPECT_FALSE(bad.ok());
  EXPECT_EQ(bad.violations.front().index, 0u);
  EXPECT_EQ(bad.violations.front().estimate, "uniform");
}

TEST(Json, CertificateAndReport) {
  const StringParams p = validate_params(1.0, 2.0);
  const IssCertificate cert = certificate(p);
  const std::string cj = certificate_to_json(cert);
  for (const char* key : {"\"kappa0\"", "\"riesz_c\"", "\"gamma\"", "\"gamma_prime\"", "\"c0\"", "\"c4\"", "\"tail_modes\""}) {
    EXPECT_NE(cj.find(key), std::string::npos) << key;
  }
  IssCertificate weak = cert;
  weak.c0 = 0.5;
  const std::string rj = report_to_json(verify_trajectory(decay_trajectory(p, {0, 1}, 3.0), weak, "s1"), true);
  for (const char* key : {"\"scenario\": \"s1\"", "\"worst_uniform_margin\"", "\"worst_l2_margin\"", "\"violations\"", "\"times\""}) {
    EXPECT_NE(rj.find(key), std::string::npos) << key;
  }
}

TEST(Asymptotics, PulseZeroAndPersistent) {
  const StringParams p = validate_params(1.0, 1.0);
  const double kappa0 = decay_rate(p);
  const UniformGrid g(256);
  SimulationConfig cfg(p, eigenstate(p, {0, 1}, g));
  cfg.t_end = 15.0 / kappa0;
  cfg.dt = 0.05;
  cfg.d = BoundarySignal(signal::PolyPulse{0.5, 2.5, 1.0});
  const AsymptoticResult pulse = asymptotic_check(simulate_spectral(cfg), 0.1, kappa0);
  EXPECT_LE(pulse.ratio, 0.05);

  cfg.d = BoundarySignal::zero();
  const AsymptoticResult free = asymptotic_check(simulate_spectral(cfg), 0.1, kappa0);
  EXPECT_LE(free.ratio, std::exp(-0.9 * cfg.t_end * 1.2337 * 0.9));

  cfg.initial = lift_boundary(0.0, p, g);
  cfg.d = BoundarySignal(signal::Sine{1.0, 1.0, 0.0});
  const AsymptoticResult sine = asymptotic_check(simulate_spectral(cfg), 0.1, kappa0);
  EXPECT_GE(sine.ratio, 0.5);

  cfg.t_end = 2.0;
  try {
    (void)asymptotic_check(simulate_spectral(cfg), 0.1, kappa0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HorizonTooShort);
  }
}

TEST(Asymptotics, DecayRateTightness) {
  // k0 >= 1 with kappa0 = beta pi^2 / 8 attained by the fundamental pair.
  const StringParams p41 = validate_params(4.0, 1.0);
  const double s41 = fit_log_slope(decay_trajectory(p41, {0, 1}, 10.0), 0.5);
  EXPECT_LE(std::abs(s41 + decay_rate(p41)), 0.02 * decay_rate(p41));
  // k0 = 0: the slow branch approaches -alpha/beta from below.
  const StringParams p12 = validate_params(1.0, 2.0);
  const double kappa0 = decay_rate(p12);
  double prev = -1e300;
  for (int k : {2, 6, 20}) {
    const double s = fit_log_slope(decay_trajectory(p12, {k, 1}, 20.0, 0.1), 0.5);
    EXPECT_LE(s, -kappa0 * (1 - 1e-9));
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_GE(prev, -kappa0 * 1.02);
}

TEST(RandomSuite, DeterministicAndViolationFree) {
  const Scenario a = random_scenario(42, 3);
  const Scenario b = random_scenario(42, 3);
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.config.params.alpha(), b.config.params.alpha());
  EXPECT_NE(random_scenario(42, 4).config.params.alpha(), a.config.params.alpha());

  const SuiteResult one = run_random_suite(7, 6, 1);
  const SuiteResult two = run_random_suite(7, 6, 2);
  EXPECT_EQ(one.failures, 0u) << (one.errors.empty() ? std::string() : one.errors.front());
  EXPECT_EQ(one.violations, 0u);
  ASSERT_EQ(one.reports.size(), two.reports.size());
  for (std::size_t i = 0; i < one.reports.size(); ++i) {
    EXPECT_EQ(one.reports[i].scenario, two.reports[i].scenario);
    EXPECT_EQ(one.reports[i].worst_uniform_margin, two.reports[i].worst_uniform_margin);
  }
  // Scaling C1 down far enough must surface violations.
  EXPECT_GT(run_random_suite(7, 6, 1, 1e-3).violations, 0u);
}

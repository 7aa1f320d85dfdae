#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kvstring/error.hpp"
#include "kvstring/signals.hpp"

using namespace kvstring;

namespace {

double brute_sup(const BoundarySignal& d, double t) {
  double m = 0;
  for (int i = 0; i <= 200000; ++i) m = std::max(m, std::abs(d.value(t * i / 200000.0)));
  return m;
}

void check_derivatives(const BoundarySignal& d, double t) {
  const double h = 1e-4;
  EXPECT_NEAR(d.derivative(t), (d.value(t + h) - d.value(t - h)) / (2 * h), 1e-6);
  EXPECT_NEAR(d.second_derivative(t), (d.derivative(t + h) - d.derivative(t - h)) / (2 * h), 1e-5);
}

}  // namespace

TEST(BoundarySignal, BuiltInValues) {
  EXPECT_EQ(BoundarySignal::zero().value(3.0), 0.0);
  EXPECT_TRUE(BoundarySignal::zero().is_zero());
  const BoundarySignal s(signal::Sine{2.0, 3.0, 0.5});
  EXPECT_DOUBLE_EQ(s.value(1.0), 2.0 * std::sin(3.5));
  const BoundarySignal e(signal::DecayingExp{1.5, 0.5});
  EXPECT_DOUBLE_EQ(e.value(2.0), 1.5 * std::exp(-1.0));
  const BoundarySignal p(signal::PolyPulse{1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(p.value(2.0), 2.0);
  EXPECT_EQ(p.value(0.5), 0.0);
  EXPECT_EQ(p.value(3.5), 0.0);
  EXPECT_EQ(p.derivative(1.0), 0.0);
  EXPECT_EQ(p.second_derivative(3.0), 0.0);
}

TEST(BoundarySignal, DerivativesMatchDifferences) {
  for (const BoundarySignal& d :
       {BoundarySignal(signal::Sine{0.7, 2.0, 0.3}), BoundarySignal(signal::DecayingExp{1.0, 0.8}),
        BoundarySignal(signal::PolyPulse{0.5, 2.0, 1.3})}) {
    for (double t : {0.6, 1.1, 1.9}) check_derivatives(d, t);
  }
}

TEST(BoundarySignal, SupMatchesBruteForce) {
  for (const BoundarySignal& d :
       {BoundarySignal(signal::Sine{0.7, 2.0, 0.3}), BoundarySignal(signal::Sine{-1.0, -5.0, 2.0}),
        BoundarySignal(signal::Sine{1.0, 0.1, 0.0}), BoundarySignal(signal::DecayingExp{-2.0, 0.8}),
        BoundarySignal(signal::PolyPulse{0.5, 2.0, 1.3})}) {
    for (double t : {0.0, 0.2, 0.9, 1.5, 4.0}) {
      EXPECT_NEAR(d.sup_abs(t), brute_sup(d, t), 1e-8) << d.value(t) << " t=" << t;
    }
  }
}

TEST(BoundarySignal, Validation) {
  EXPECT_THROW(BoundarySignal(signal::DecayingExp{1.0, -1.0}), Error);
  EXPECT_THROW(BoundarySignal(signal::PolyPulse{2.0, 1.0, 1.0}), Error);
  EXPECT_THROW(BoundarySignal(signal::Sampled{{0.0}, {1.0}, {0.0}, {0.0}}), Error);
  EXPECT_THROW(BoundarySignal(signal::Sampled{{0.0, 0.0}, {1, 1}, {0, 0}, {0, 0}}), Error);
  EXPECT_TRUE(std::isinf(BoundarySignal(signal::Sine{}).horizon()));
}

TEST(BoundarySignal, SampledHermiteReproducesQuintics) {
  // A quintic is reproduced exactly by one Hermite span.
  auto f = [](double t) { return 1 + t - 2 * t * t + 0.5 * std::pow(t, 5); };
  auto f1 = [](double t) { return 1 - 4 * t + 2.5 * std::pow(t, 4); };
  auto f2 = [](double t) { return -4 + 10 * std::pow(t, 3); };
  signal::Sampled s;
  for (double t : {0.0, 0.7, 2.0}) {
    s.times.push_back(t);
    s.values.push_back(f(t));
    s.first.push_back(f1(t));
    s.second.push_back(f2(t));
  }
  const BoundarySignal d(s);
  for (double t : {0.1, 0.7, 1.3, 1.99}) {
    EXPECT_NEAR(d.value(t), f(t), 1e-12);
    EXPECT_NEAR(d.derivative(t), f1(t), 1e-11);
    EXPECT_NEAR(d.second_derivative(t), f2(t), 1e-10);
  }
  EXPECT_DOUBLE_EQ(d.horizon(), 2.0);
  EXPECT_THROW(d.value(2.5), Error);
  EXPECT_GE(d.sup_abs(2.0), std::abs(f(2.0)));
}

TEST(DistributedSignal, SeparableNormsAndSamples) {
  const UniformGrid g(64);
  signal::Separable sep{g, {}, BoundarySignal(signal::Sine{2.0, 1.0, 0.0})};
  for (double x : g.points()) sep.profile.emplace_back(std::sin(std::numbers::pi * x), 0.0);
  const DistributedSignal u(sep);
  const double t = 0.4;
  EXPECT_NEAR(u.l2_norm_at(t), std::abs(2.0 * std::sin(t)) / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(u.sup_l2(10.0), 2.0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(u.value(t, 0.5).real(), 2.0 * std::sin(t), 1e-12);
  EXPECT_EQ(u.samples_at(t).size(), g.size());
  EXPECT_TRUE(DistributedSignal::zero().samples_at(1.0).empty());
  EXPECT_EQ(DistributedSignal::zero().l2_norm_at(1.0), 0.0);
}

TEST(DistributedSignal, TableInterpolatesLinearlyInTime) {
  const UniformGrid g(4);
  signal::Table tab{{0.0, 1.0}, g, {std::vector<cplx>(5, 1.0), std::vector<cplx>(5, 3.0)}};
  const DistributedSignal u(tab);
  EXPECT_NEAR(u.value(0.25, 0.3).real(), 1.5, 1e-14);
  EXPECT_NEAR(u.l2_norm_at(0.5), 2.0, 1e-14);
  EXPECT_NEAR(u.sup_l2(1.0), 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(u.horizon(), 1.0);
  signal::Table bad{{0.0, 1.0}, g, {std::vector<cplx>(5, 1.0), std::vector<cplx>(3, 1.0)}};
  EXPECT_THROW(DistributedSignal{bad}, Error);
}

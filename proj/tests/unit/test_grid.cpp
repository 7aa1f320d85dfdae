#include <cmath>

#include <gtest/gtest.h>

#include "kvstring/error.hpp"
#include "kvstring/grid.hpp"

using namespace kvstring;
using cplx = std::complex<double>;

TEST(UniformGrid, RequiresEvenIntervalCount) {
  EXPECT_THROW(UniformGrid(3), Error);
  EXPECT_THROW(UniformGrid(0), Error);
  const UniformGrid g(8);
  EXPECT_EQ(g.size(), 9u);
  EXPECT_DOUBLE_EQ(g.x(8), 1.0);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.125);
}

TEST(Simpson, ExactForCubics) {
  const UniformGrid g(4);
  std::vector<double> f;
  for (double x : g.points()) f.push_back(4 * x * x * x - 3 * x * x + 1);
  EXPECT_NEAR(integrate(f, g), 1.0, 1e-15);
  const auto w = simpson_weights(g);
  double sum = 0;
  for (double v : w) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(Simpson, FourthOrderOnSmoothData) {
  double prev = 0;
  for (std::size_t n : {16u, 32u, 64u}) {
    const UniformGrid g(n);
    std::vector<cplx> f;
    for (double x : g.points()) f.emplace_back(std::exp(x), std::cos(3 * x));
    const cplx want(std::exp(1.0) - 1.0, std::sin(3.0) / 3.0);
    const double err = std::abs(integrate(f, g) - want);
    if (prev > 0) EXPECT_GT(prev / err, 14.0);
    prev = err;
  }
}

TEST(Simpson, RejectsMismatchedSamples) {
  const UniformGrid g(4);
  std::vector<double> f(4, 1.0);
  EXPECT_THROW(integrate(f, g), Error);
}

TEST(CumulativeIntegral, ThirdOrderAccurate) {
  double prev = 0;
  for (std::size_t n : {32u, 64u, 128u}) {
    const UniformGrid g(n);
    std::vector<cplx> f;
    for (double x : g.points()) f.emplace_back(std::cos(2 * x), 0.0);
    const auto F = cumulative_integral(f, g);
    double err = 0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      err = std::max(err, std::abs(F[i] - std::sin(2 * g.x(i)) / 2.0));
    }
    EXPECT_EQ(F[0], cplx{});
    if (prev > 0) EXPECT_GT(prev / err, 7.0);
    prev = err;
  }
}

TEST(Differentiate, SecondOrderIncludingEnds) {
  double prev = 0;
  for (std::size_t n : {32u, 64u, 128u}) {
    const UniformGrid g(n);
    std::vector<cplx> f;
    for (double x : g.points()) f.emplace_back(std::sin(3 * x), 0.0);
    const auto d = differentiate(f, g);
    double err = 0;
    for (std::size_t i = 0; i < d.size(); ++i) err = std::max(err, std::abs(d[i] - 3 * std::cos(3 * g.x(i))));
    if (prev > 0) EXPECT_GT(prev / err, 3.5);
    prev = err;
  }
}

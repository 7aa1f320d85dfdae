#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kvstring {

/// Uniform grid on [0, 1] with both endpoints. The interval count must be
/// even so that composite Simpson applies on the full grid.
class UniformGrid {
 public:
  explicit UniformGrid(std::size_t intervals);

  std::size_t intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_ + 1; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(intervals_); }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * spacing(); }
  std::vector<double> points() const;

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

 private:
  std::size_t intervals_;
};

/// Composite Simpson weights for the grid.
std::vector<double> simpson_weights(const UniformGrid& grid);

double integrate(std::span<const double> f, const UniformGrid& grid);
std::complex<double> integrate(std::span<const std::complex<double>> f, const UniformGrid& grid);

/// F(x_i) = int_0^{x_i} f, third-order local rule on every interval.
std::vector<std::complex<double>> cumulative_integral(std::span<const std::complex<double>> f,
                                                      const UniformGrid& grid);

/// Second-order finite-difference derivative: centered inside, one-sided at the ends.
std::vector<std::complex<double>> differentiate(std::span<const std::complex<double>> f,
                                                const UniformGrid& grid);

}  // namespace kvstring

#include "kvstring/grid.hpp"

#include "kvstring/error.hpp"

namespace kvstring {

using cplx = std::complex<double>;

UniformGrid::UniformGrid(std::size_t intervals) : intervals_(intervals) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument,
                "grid needs an even number of intervals (odd sample count) for Simpson's rule, got " +
                    std::to_string(intervals));
  }
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x(i);
  return out;
}

std::vector<double> simpson_weights(const UniformGrid& grid) {
  const std::size_t n = grid.intervals();
  const double h = grid.spacing();
  std::vector<double> w(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (i == 0 || i == n) {
      w[i] = h / 3.0;
    } else {
      w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    }
  }
  return w;
}

namespace {

template <typename T>
T simpson(std::span<const T> f, const UniformGrid& grid) {
  if (f.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "sample count differs from grid");
  const std::size_t n = grid.intervals();
  T odd{}, even{};
  for (std::size_t i = 1; i < n; i += 2) odd += f[i];
  for (std::size_t i = 2; i < n; i += 2) even += f[i];
  return (f[0] + f[n] + 4.0 * odd + 2.0 * even) * (grid.spacing() / 3.0);
}

}  // namespace

double integrate(std::span<const double> f, const UniformGrid& grid) { return simpson(f, grid); }

cplx integrate(std::span<const cplx> f, const UniformGrid& grid) { return simpson(f, grid); }

std::vector<cplx> cumulative_integral(std::span<const cplx> f, const UniformGrid& grid) {
  if (f.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "sample count differs from grid");
  const std::size_t n = grid.intervals();
  const double h12 = grid.spacing() / 12.0;
  std::vector<cplx> out(n + 1);
  out[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Quadratic through three neighbours, integrated over [x_i, x_{i+1}].
    const cplx piece = i + 2 <= n ? h12 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2])
                                  : h12 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
    out[i + 1] = out[i] + piece;
  }
  return out;
}

std::vector<cplx> differentiate(std::span<const cplx> f, const UniformGrid& grid) {
  if (f.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "sample count differs from grid");
  const std::size_t n = grid.intervals();
  const double inv2h = 0.5 / grid.spacing();
  std::vector<cplx> out(n + 1);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  for (std::size_t i = 1; i < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
  out[n] = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) * inv2h;
  return out;
}

}  // namespace kvstring

#include "kvstring/state.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "kvstring/error.hpp"

namespace kvstring {

namespace {

constexpr std::size_t kMinGeneratorIntervals = 16;

void require_same_grid(const StateVector& a, const StateVector& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorKind::GridMismatch, "states live on different grids (" +
                                             std::to_string(a.grid().intervals()) + " vs " +
                                             std::to_string(b.grid().intervals()) + " intervals)");
  }
}

// Second-order second difference: centered inside, four-point one-sided at the ends.
std::vector<cplx> second_derivative(const std::vector<cplx>& f, const UniformGrid& grid) {
  const std::size_t n = f.size();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  std::vector<cplx> out(n);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv_h2;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv_h2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv_h2;
  return out;
}

void require_fine_grid(const UniformGrid& grid) {
  if (grid.intervals() < kMinGeneratorIntervals) {
    throw Error(ErrorKind::GridTooCoarse, "finite differences need at least 16 intervals");
  }
}

}  // namespace

StateVector::StateVector(UniformGrid grid, std::vector<cplx> x1_prime, std::vector<cplx> x2)
    : grid_(grid), x1_prime_(std::move(x1_prime)), x2_(std::move(x2)) {
  if (x1_prime_.size() != grid_.size() || x2_.size() != grid_.size()) {
    throw Error(ErrorKind::GridMismatch, "component sample counts must match the grid");
  }
}

StateVector StateVector::zero(const UniformGrid& grid) {
  return {grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size())};
}

StateVector StateVector::from_functions(const UniformGrid& grid,
                                        const std::function<cplx(double)>& x1_prime,
                                        const std::function<cplx(double)>& x2) {
  std::vector<cplx> a(grid.size()), b(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a[i] = x1_prime(grid.x(i));
    b[i] = x2(grid.x(i));
  }
  return {grid, std::move(a), std::move(b)};
}

std::vector<cplx> StateVector::x1() const { return cumulative_integral(x1_prime_, grid_); }

StateVector& StateVector::operator+=(const StateVector& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < x2_.size(); ++i) {
    x1_prime_[i] += other.x1_prime_[i];
    x2_[i] += other.x2_[i];
  }
  return *this;
}

StateVector& StateVector::operator*=(cplx scale) {
  for (auto& v : x1_prime_) v *= scale;
  for (auto& v : x2_) v *= scale;
  return *this;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a += (-1.0) * b; }
StateVector operator*(cplx scale, StateVector a) { return a *= scale; }

CoefficientSet CoefficientSet::zeros(int truncation) {
  CoefficientSet c;
  c.truncation = truncation;
  c.values.assign(2 * static_cast<std::size_t>(truncation + 1), cplx{});
  return c;
}

cplx h_inner(const StateVector& a, const StateVector& b, const StringParams& params) {
  require_same_grid(a, b);
  const auto w = simpson_weights(a.grid());
  cplx sum{};
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum += w[i] * (params.alpha() * a.x1_prime()[i] * std::conj(b.x1_prime()[i]) +
                   a.x2()[i] * std::conj(b.x2()[i]));
  }
  return sum;
}

double h_norm(const StateVector& a, const StringParams& params) {
  return std::sqrt(std::max(0.0, h_inner(a, a, params).real()));
}

CoefficientSet project(const StateVector& state, const ModalBasis& basis) {
  const UniformGrid& grid = state.grid();
  const auto w = simpson_weights(grid);
  const double alpha = basis.params().alpha();
  CoefficientSet out = CoefficientSet::zeros(basis.truncation());
  for (int k = 0; k <= basis.truncation(); ++k) {
    // Both duals at this k share the cos / sin shapes; integrate them once.
    const double wn = (k + 0.5) * std::numbers::pi;
    cplx cos_part{}, sin_part{};
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double x = grid.x(i);
      cos_part += w[i] * state.x1_prime()[i] * std::cos(wn * x);
      sin_part += w[i] * state.x2()[i] * std::sin(wn * x);
    }
    for (int flat = 2 * k; flat <= 2 * k + 1; ++flat) {
      const ModalProfile& dual = basis.dual(static_cast<std::size_t>(flat));
      out.values[static_cast<std::size_t>(flat)] =
          alpha * wn * std::conj(dual.x1_coeff) * cos_part + std::conj(dual.x2_coeff) * sin_part;
    }
  }
  return out;
}

CoefficientSet project(const StateVector& state, const StringParams& params, int truncation) {
  return project(state, ModalBasis(params, truncation));
}

StateVector reconstruct(const CoefficientSet& coeffs, const ModalBasis& basis,
                        const UniformGrid& grid) {
  StateVector out = StateVector::zero(grid);
  if (coeffs.truncation > basis.truncation()) {
    throw Error(ErrorKind::InvalidArgument, "coefficients exceed the basis truncation");
  }
  std::vector<cplx> x1p(grid.size()), x2(grid.size());
  for (int k = 0; k <= coeffs.truncation; ++k) {
    const double wn = (k + 0.5) * std::numbers::pi;
    const auto fm = static_cast<std::size_t>(2 * k);
    const cplx a1 = coeffs.values[fm] * basis.primal(fm).x1_coeff +
                    coeffs.values[fm + 1] * basis.primal(fm + 1).x1_coeff;
    const cplx a2 = coeffs.values[fm] * basis.primal(fm).x2_coeff +
                    coeffs.values[fm + 1] * basis.primal(fm + 1).x2_coeff;
    if (a1 == cplx{} && a2 == cplx{}) continue;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.x(i);
      x1p[i] += a1 * wn * std::cos(wn * x);
      x2[i] += a2 * std::sin(wn * x);
    }
  }
  return {grid, std::move(x1p), std::move(x2)};
}

StateVector reconstruct(const CoefficientSet& coeffs, const StringParams& params,
                        const UniformGrid& grid) {
  return reconstruct(coeffs, ModalBasis(params, std::max(coeffs.truncation, 0)), grid);
}

StateVector eigenstate(const StringParams& params, ModeIndex index, const UniformGrid& grid,
                       Family family) {
  const ModalProfile p = modal_profile(params, index, family);
  return StateVector::from_functions(
      grid, [&](double x) { return p.x1_prime(x); }, [&](double x) { return p.x2(x); });
}

SandwichResult riesz_sandwich_check(const CoefficientSet& coeffs, const StringParams& params) {
  const ModalBasis basis(params, coeffs.truncation);
  const double value = basis.gram_norm_squared(coeffs.values);
  double total = 0.0;
  for (const cplx& a : coeffs.values) total += std::norm(a);

  SandwichResult r;
  r.riesz_c = basis.riesz_c();
  // Relative slack of a few ulps: the extremal sets attain the bounds exactly.
  const double slack = 1e-12 * total;
  r.lower_ok = value >= (1.0 - r.riesz_c) * total - slack;
  r.upper_ok = value <= (1.0 + r.riesz_c) * total + slack;
  r.ratio = total > 0.0 ? value / total : 1.0;
  return r;
}

StateVector apply_generator(const StateVector& state, const StringParams& params) {
  require_fine_grid(state.grid());
  const auto& x2 = state.x2();
  double scale = 0.0;
  for (const cplx& v : x2) scale = std::max(scale, std::abs(v));
  if (std::abs(x2.front()) > 1e-10 * std::max(scale, 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "x2 must vanish at the clamped end for A(x1, x2) to stay in H");
  }
  std::vector<cplx> x2_prime = differentiate(x2, state.grid());
  std::vector<cplx> out2 = differentiate(state.x1_prime(), state.grid());
  const std::vector<cplx> x2_second = second_derivative(x2, state.grid());
  for (std::size_t i = 0; i < out2.size(); ++i) {
    out2[i] = params.alpha() * out2[i] + params.beta() * x2_second[i];
  }
  return {state.grid(), std::move(x2_prime), std::move(out2)};
}

StateVector apply_inverse_generator(const StateVector& state, const StringParams& params) {
  const UniformGrid& grid = state.grid();
  const std::vector<cplx> x2_integral = cumulative_integral(state.x2(), grid);
  const cplx total = x2_integral.back();
  std::vector<cplx> out1(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx tail = total - x2_integral[i];  // int_x^1 x2
    out1[i] = -(params.beta() / params.alpha()) * state.x1_prime()[i] - tail / params.alpha();
  }
  return {grid, std::move(out1), state.x1()};
}

StateVector lift_boundary(cplx d_value, const StringParams& params, const UniformGrid& grid) {
  return {grid, std::vector<cplx>(grid.size(), d_value / params.alpha()),
          std::vector<cplx>(grid.size())};
}

cplx boundary_trace(const StateVector& state, const StringParams& params) {
  require_fine_grid(state.grid());
  const auto& f = state.x2();
  const std::size_t n = state.grid().intervals();
  // Fourth-order one-sided derivative at x = 1.
  const cplx x2_prime = (25.0 * f[n] - 48.0 * f[n - 1] + 36.0 * f[n - 2] - 16.0 * f[n - 3] +
                         3.0 * f[n - 4]) /
                        (12.0 * state.grid().spacing());
  return params.alpha() * state.x1_prime()[n] + params.beta() * x2_prime;
}

StateVector semigroup_apply(const StateVector& state, double t, const StringParams& params,
                            int truncation) {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "semigroup time must be non-negative");
  const ModalBasis basis(params, truncation);
  CoefficientSet c = project(state, basis);
  for (std::size_t i = 0; i < c.size(); ++i) c.values[i] *= std::exp(basis.mode(i).lambda * t);
  return reconstruct(c, basis, state.grid());
}

namespace {

std::vector<cplx> cubic_resample(const std::vector<cplx>& f, const UniformGrid& from,
                                 const UniformGrid& to) {
  const std::size_t n = from.intervals();
  std::vector<cplx> out(to.size());
  for (std::size_t j = 0; j < to.size(); ++j) {
    const double s = to.x(j) * static_cast<double>(n);
    const double nearest = std::round(s);
    if (std::abs(s - nearest) < 1e-9) {
      out[j] = f[static_cast<std::size_t>(nearest)];
      continue;
    }
    // Four-point stencil, shifted inward at the ends.
    auto base = static_cast<std::ptrdiff_t>(std::floor(s)) - 1;
    base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(n) - 3);
    cplx value{};
    for (std::ptrdiff_t a = 0; a < 4; ++a) {
      double weight = 1.0;
      for (std::ptrdiff_t b = 0; b < 4; ++b) {
        if (a == b) continue;
        weight *= (s - static_cast<double>(base + b)) / static_cast<double>(a - b);
      }
      value += weight * f[static_cast<std::size_t>(base + a)];
    }
    out[j] = value;
  }
  return out;
}

}  // namespace

StateVector resample(const StateVector& state, const UniformGrid& grid) {
  if (grid == state.grid()) return state;
  return {grid, cubic_resample(state.x1_prime(), state.grid(), grid),
          cubic_resample(state.x2(), state.grid(), grid)};
}

void write_state_csv(std::ostream& os, const StateVector& state) {
  os << "x,x1,x1_prime_re,x1_prime_im,x2_re,x2_im\n";
  const std::vector<cplx> x1 = state.x1();
  for (std::size_t i = 0; i < state.grid().size(); ++i) {
    os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", state.grid().x(i),
                      x1[i].real(), state.x1_prime()[i].real(), state.x1_prime()[i].imag(),
                      state.x2()[i].real(), state.x2()[i].imag());
  }
}

StateVector read_state_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,x1,x1_prime_re", 0) != 0) {
    throw Error(ErrorKind::InvalidArgument, "state CSV header missing");
  }
  std::vector<cplx> x1p, x2;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double v[6];
    for (double& value : v) {
      if (!std::getline(row, cell, ',')) throw Error(ErrorKind::InvalidArgument, "short CSV row");
      value = std::stod(cell);
    }
    x1p.emplace_back(v[2], v[3]);
    x2.emplace_back(v[4], v[5]);
  }
  if (x1p.size() < 3) throw Error(ErrorKind::InvalidArgument, "state CSV has too few rows");
  return {UniformGrid(x1p.size() - 1), std::move(x1p), std::move(x2)};
}

}  // namespace kvstring

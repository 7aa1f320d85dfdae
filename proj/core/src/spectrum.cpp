#include "kvstring/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kvstring/error.hpp"

namespace kvstring {

namespace {

constexpr double kPi = std::numbers::pi;

struct PolyCoeffs {
  double linear;    // k~^2 beta pi^2
  double constant;  // k~^2 alpha pi^2
};

PolyCoeffs poly_coeffs(const StringParams& params, double kt) {
  const double kt2pi2 = kt * kt * kPi * kPi;
  return {kt2pi2 * params.beta(), kt2pi2 * params.alpha()};
}

}  // namespace

cplx eigenvalue(const StringParams& params, ModeIndex index) {
  const double kt = index.k_tilde();
  const double half_trace = -0.5 * kt * kt * params.beta() * kPi * kPi;
  const double damping = kt * params.beta() * kPi;
  const double stiffness = 2.0 * std::sqrt(params.alpha());

  if (index.k < params.k0()) {
    // 4 alpha - k~^2 beta^2 pi^2 in factored form.
    const double root = 0.5 * kt * kPi * std::sqrt((stiffness - damping) * (stiffness + damping));
    return {half_trace, index.eps * root};
  }

  const double root = 0.5 * kt * kPi * std::sqrt((damping - stiffness) * (damping + stiffness));
  const double fast = half_trace - root;
  if (index.eps < 0) return {fast, 0.0};
  // The slow root from the product of the roots; the sum would cancel.
  return {poly_coeffs(params, kt).constant / fast, 0.0};
}

double char_poly_residual(const StringParams& params, ModeIndex index, cplx lam) {
  const long double kt = index.k_tilde();
  const long double pi = std::numbers::pi_v<long double>;
  const std::complex<long double> z(lam.real(), lam.imag());
  const long double b = kt * kt * static_cast<long double>(params.beta()) * pi * pi;
  const long double c = kt * kt * static_cast<long double>(params.alpha()) * pi * pi;
  const std::complex<long double> p = z * z + b * z + c;
  const long double scale = std::max(1.0L, std::norm(z));
  return static_cast<double>(std::abs(p) / scale);
}

double char_poly_backward_error(const StringParams& params, ModeIndex index, cplx lam) {
  const long double kt = index.k_tilde();
  const long double pi = std::numbers::pi_v<long double>;
  const std::complex<long double> z(lam.real(), lam.imag());
  const long double b = kt * kt * static_cast<long double>(params.beta()) * pi * pi;
  const long double c = kt * kt * static_cast<long double>(params.alpha()) * pi * pi;
  const std::complex<long double> p = z * z + b * z + c;
  const long double r = std::abs(z);
  return static_cast<double>(std::abs(p) / (r * r + b * r + c));
}

ModeData mode_data(const StringParams& params, ModeIndex index) {
  const double kt = index.k_tilde();
  const cplx lam = eigenvalue(params, index);
  const cplx partner = eigenvalue(params, ModeIndex(index.k, -index.eps));
  const double stiffness = poly_coeffs(params, kt).constant;

  ModeData m;
  m.index = index;
  m.lambda = lam;
  m.mu = std::conj(lam);
  m.phi_norm = std::sqrt(0.5 * (1.0 + stiffness / std::norm(lam)));
  const cplx gap = 1.0 - partner / lam;
  m.pairing = gap / (2.0 * m.phi_norm);
  m.gamma = 2.0 * m.phi_norm / std::abs(lam.real() * gap);
  return m;
}

cplx cross_inner_product(const StringParams& params, int k) {
  const double stiffness = poly_coeffs(params, k + 0.5).constant;
  const cplx minus = eigenvalue(params, ModeIndex(k, -1));
  const cplx plus = eigenvalue(params, ModeIndex(k, 1));
  const cplx numerator = 1.0 + stiffness / (minus * std::conj(plus));
  const double denominator = std::sqrt(1.0 + stiffness / std::norm(minus)) *
                             std::sqrt(1.0 + stiffness / std::norm(plus));
  return numerator / denominator;
}

double riesz_constant(const StringParams& params) {
  const double kt0 = params.k0() + 0.5;
  double c = 2.0 * std::sqrt(params.alpha()) / (kt0 * params.beta() * kPi);
  for (int k = 0; k < params.k0(); ++k) c = std::max(c, std::abs(cross_inner_product(params, k)));
  if (!(c < 1.0)) {
    throw Error(ErrorKind::RieszConstantDegenerate,
                "Riesz constant C = " + std::to_string(c) +
                    " is not below 1; tighten the assumption tolerance");
  }
  return c;
}

double ModalProfile::wavenumber() const noexcept { return k_tilde * kPi; }

cplx ModalProfile::x1(double x) const { return x1_coeff * std::sin(wavenumber() * x); }

cplx ModalProfile::x1_prime(double x) const {
  return x1_coeff * wavenumber() * std::cos(wavenumber() * x);
}

cplx ModalProfile::x2(double x) const { return x2_coeff * std::sin(wavenumber() * x); }

ModalProfile modal_profile(const StringParams& params, ModeIndex index, Family family) {
  const ModeData m = mode_data(params, index);
  ModalProfile p;
  p.k_tilde = index.k_tilde();
  switch (family) {
    case Family::primal_phi:
      p.x1_coeff = 1.0 / m.lambda;
      p.x2_coeff = 1.0;
      break;
    case Family::primal_Phi:
      p.x1_coeff = 1.0 / (m.lambda * m.phi_norm);
      p.x2_coeff = 1.0 / m.phi_norm;
      break;
    case Family::dual_psi:
      p.x1_coeff = -1.0 / m.mu;
      p.x2_coeff = 1.0;
      break;
    case Family::dual_Psi: {
      const cplx scale = 1.0 / std::conj(m.pairing);
      p.x1_coeff = -scale / m.mu;
      p.x2_coeff = scale;
      break;
    }
  }
  return p;
}

cplx profile_inner(const StringParams& params, const ModalProfile& a, const ModalProfile& b) {
  if (a.k_tilde != b.k_tilde) return {0.0, 0.0};
  // Both cos^2 and sin^2 of k~ pi x integrate to 1/2 over [0, 1].
  const double w = a.wavenumber();
  return 0.5 * (params.alpha() * w * w * a.x1_coeff * std::conj(b.x1_coeff) +
                a.x2_coeff * std::conj(b.x2_coeff));
}

ComponentSamples eigenfunction_samples(const StringParams& params, ModeIndex index,
                                       std::span<const double> grid, Family family) {
  const ModalProfile p = modal_profile(params, index, family);
  ComponentSamples s;
  s.first.reserve(grid.size());
  s.second.reserve(grid.size());
  s.first_derivative.reserve(grid.size());
  for (double x : grid) {
    s.first.push_back(p.x1(x));
    s.second.push_back(p.x2(x));
    s.first_derivative.push_back(p.x1_prime(x));
  }
  return s;
}

std::vector<ModeIndex> modes_up_to(int truncation) {
  std::vector<ModeIndex> out;
  out.reserve(2 * static_cast<std::size_t>(truncation + 1));
  for (int k = 0; k <= truncation; ++k) {
    out.emplace_back(k, -1);
    out.emplace_back(k, 1);
  }
  return out;
}

ModalBasis::ModalBasis(const StringParams& params, int truncation)
    : params_(params), truncation_(truncation), riesz_c_(riesz_constant(params)) {
  if (truncation < 0) throw Error(ErrorKind::InvalidArgument, "truncation must be >= 0");
  for (const ModeIndex& idx : modes_up_to(truncation)) {
    modes_.push_back(mode_data(params, idx));
    primal_.push_back(modal_profile(params, idx, Family::primal_Phi));
    dual_.push_back(modal_profile(params, idx, Family::dual_Psi));
  }
  for (int k = 0; k <= truncation; ++k) cross_.push_back(cross_inner_product(params, k));
}

double ModalBasis::gram_norm_squared(std::span<const cplx> coeffs) const {
  if (coeffs.size() != modes_.size()) {
    throw Error(ErrorKind::InvalidArgument, "coefficient count does not match the basis");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < cross_.size(); ++k) {
    const cplx minus = coeffs[2 * k];
    const cplx plus = coeffs[2 * k + 1];
    total += std::norm(minus) + std::norm(plus) +
             2.0 * (minus * std::conj(plus) * cross_[k]).real();
  }
  return total;
}

}  // namespace kvstring

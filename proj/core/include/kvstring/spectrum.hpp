#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kvstring/params.hpp"

namespace kvstring {

using cplx = std::complex<double>;

/// Eigenvalue lambda_{k,eps} of the disturbance-free generator A0.
/// Branch selection is by integer comparison of k against k0, so modes with
/// k >= k0 come back with an imaginary part that is exactly zero.
cplx eigenvalue(const StringParams& params, ModeIndex index);

/// |lam^2 + k~^2 beta pi^2 lam + k~^2 alpha pi^2| / max(1, |lam|^2).
double char_poly_residual(const StringParams& params, ModeIndex index, cplx lam);

/// Scale-aware backward error of lam as a root of the same polynomial:
/// |P(lam)| / (|lam|^2 + |b||lam| + |c|).
double char_poly_backward_error(const StringParams& params, ModeIndex index, cplx lam);

struct ModeData {
  ModeIndex index;
  cplx lambda;      ///< eigenvalue of A0
  cplx mu;          ///< eigenvalue of the adjoint, conj(lambda)
  double phi_norm;  ///< H-norm of the unnormalized eigenvector phi
  cplx pairing;     ///< <Phi_{k,eps}, psi_{k,eps}>_H
  double gamma;     ///< |Psi^2(1) / Re lambda|, the per-mode boundary gain
};

ModeData mode_data(const StringParams& params, ModeIndex index);

/// <Phi_{k,-1}, Phi_{k,+1}>_H. The only non-zero off-diagonal entries of the
/// Gram matrix of the normalized eigenvectors.
cplx cross_inner_product(const StringParams& params, int k);

/// Riesz constant C: the Gram matrix is sandwiched between (1-C) I and (1+C) I.
/// Throws Error(RieszConstantDegenerate) if C >= 1.
double riesz_constant(const StringParams& params);

enum class Family {
  primal_phi,  ///< eigenvector of A0, unnormalized
  primal_Phi,  ///< phi / ||phi||_H
  dual_psi,    ///< eigenvector of the adjoint, unnormalized
  dual_Psi,    ///< psi / conj(<Phi, psi>_H), biorthogonal to Primal_Phi
};

/// Every eigenvector (primal or dual) has the shape
///   x1(x) = x1_coeff * sin(k~ pi x),  x2(x) = x2_coeff * sin(k~ pi x),
/// so x1'(x) = x1_coeff * k~ pi * cos(k~ pi x).
struct ModalProfile {
  double k_tilde = 0.5;
  cplx x1_coeff;
  cplx x2_coeff;

  double wavenumber() const noexcept;
  cplx x1(double x) const;
  cplx x1_prime(double x) const;
  cplx x2(double x) const;
};

ModalProfile modal_profile(const StringParams& params, ModeIndex index, Family family);

/// Closed-form H inner product of two modal profiles.
cplx profile_inner(const StringParams& params, const ModalProfile& a, const ModalProfile& b);

struct ComponentSamples {
  std::vector<cplx> first;             ///< x1 at the grid points
  std::vector<cplx> second;            ///< x2 at the grid points
  std::vector<cplx> first_derivative;  ///< x1' at the grid points (analytic)
};

ComponentSamples eigenfunction_samples(const StringParams& params, ModeIndex index,
                                       std::span<const double> grid, Family family);

/// Spectral data for all modes with k <= truncation, precomputed once.
class ModalBasis {
 public:
  ModalBasis(const StringParams& params, int truncation);

  const StringParams& params() const noexcept { return params_; }
  int truncation() const noexcept { return truncation_; }
  std::size_t size() const noexcept { return modes_.size(); }
  double riesz_c() const noexcept { return riesz_c_; }

  const ModeData& mode(std::size_t flat) const { return modes_[flat]; }
  const std::vector<ModeData>& modes() const noexcept { return modes_; }
  const ModalProfile& primal(std::size_t flat) const { return primal_[flat]; }
  const ModalProfile& dual(std::size_t flat) const { return dual_[flat]; }
  cplx cross(int k) const { return cross_[static_cast<std::size_t>(k)]; }

  /// ||sum_i a_i Phi_i||_H^2 through the block-diagonal Gram identity.
  double gram_norm_squared(std::span<const cplx> coeffs) const;

 private:
  StringParams params_;
  int truncation_;
  double riesz_c_;
  std::vector<ModeData> modes_;
  std::vector<ModalProfile> primal_;
  std::vector<ModalProfile> dual_;
  std::vector<cplx> cross_;
};

std::vector<ModeIndex> modes_up_to(int truncation);

}  // namespace kvstring

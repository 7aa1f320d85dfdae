#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "kvstring/grid.hpp"
#include "kvstring/spectrum.hpp"

namespace kvstring {

/// Grid-sampled element of H = H^1_L(0,1) x L^2(0,1).
///
/// The first component is stored through its derivative x1' together with
/// the clamped value x1(0) = 0; the H-norm only sees x1' and x2, and x1 is
/// recovered by cumulative quadrature when it is needed.
class StateVector {
 public:
  StateVector(UniformGrid grid, std::vector<cplx> x1_prime, std::vector<cplx> x2);

  static StateVector zero(const UniformGrid& grid);
  static StateVector from_functions(const UniformGrid& grid,
                                    const std::function<cplx(double)>& x1_prime,
                                    const std::function<cplx(double)>& x2);

  const UniformGrid& grid() const noexcept { return grid_; }
  const std::vector<cplx>& x1_prime() const noexcept { return x1_prime_; }
  const std::vector<cplx>& x2() const noexcept { return x2_; }
  cplx x1_left() const noexcept { return {0.0, 0.0}; }

  /// x1 at the grid points by cumulative quadrature of x1'.
  std::vector<cplx> x1() const;

  StateVector& operator+=(const StateVector& other);
  StateVector& operator*=(cplx scale);

 private:
  UniformGrid grid_;
  std::vector<cplx> x1_prime_;
  std::vector<cplx> x2_;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);
StateVector operator*(cplx scale, StateVector a);

/// Expansion coefficients c_{k,eps} over the normalized eigenvectors, for
/// every mode with k <= truncation, in ModeIndex::flat() order.
struct CoefficientSet {
  int truncation = -1;
  std::vector<cplx> values;

  static CoefficientSet zeros(int truncation);

  std::size_t size() const noexcept { return values.size(); }
  ModeIndex mode(std::size_t flat) const { return ModeIndex::from_flat(static_cast<int>(flat)); }
  cplx& operator[](ModeIndex m) { return values.at(static_cast<std::size_t>(m.flat())); }
  cplx operator[](ModeIndex m) const { return values.at(static_cast<std::size_t>(m.flat())); }
};

/// Simpson approximation of int alpha a1' conj(b1') + a2 conj(b2).
cplx h_inner(const StateVector& a, const StateVector& b, const StringParams& params);
double h_norm(const StateVector& a, const StringParams& params);

/// c_{k,eps} = <state, Psi_{k,eps}>_H with analytic dual eigenfunctions.
CoefficientSet project(const StateVector& state, const ModalBasis& basis);
CoefficientSet project(const StateVector& state, const StringParams& params, int truncation);

/// sum_{k,eps} c_{k,eps} Phi_{k,eps} sampled on the grid.
StateVector reconstruct(const CoefficientSet& coeffs, const ModalBasis& basis,
                        const UniformGrid& grid);
StateVector reconstruct(const CoefficientSet& coeffs, const StringParams& params,
                        const UniformGrid& grid);

/// Analytic samples of the normalized eigenvector Phi_{k,eps}.
StateVector eigenstate(const StringParams& params, ModeIndex index, const UniformGrid& grid,
                       Family family = Family::primal_Phi);

struct SandwichResult {
  bool lower_ok = false;
  bool upper_ok = false;
  double ratio = 0.0;  ///< ||sum a Phi||^2 / sum |a|^2
  double riesz_c = 0.0;
};

/// Checks (1-C) sum|a|^2 <= ||sum a Phi||_H^2 <= (1+C) sum|a|^2 through the
/// closed-form Gram identity.
SandwichResult riesz_sandwich_check(const CoefficientSet& coeffs, const StringParams& params);

/// A(x1, x2) = (x2, (alpha x1' + beta x2')') by finite differences.
StateVector apply_generator(const StateVector& state, const StringParams& params);

/// Closed-form inverse of the disturbance-free generator,
/// A0^{-1}(x1, x2) = (-(beta/alpha) x1 - (1/alpha) int_0^x int_s^1 x2, x1).
StateVector apply_inverse_generator(const StateVector& state, const StringParams& params);

/// Lifting B d = (d x / alpha, 0): A B = 0 and the boundary trace of B d is d.
StateVector lift_boundary(cplx d_value, const StringParams& params, const UniformGrid& grid);

/// (alpha x1' + beta x2')(1), with a one-sided stencil for x2'(1).
cplx boundary_trace(const StateVector& state, const StringParams& params);

/// T(t) state through the spectral representation truncated at k <= truncation.
StateVector semigroup_apply(const StateVector& state, double t, const StringParams& params,
                            int truncation);

/// Interpolates a state onto another grid (local cubic for x1' and x2).
StateVector resample(const StateVector& state, const UniformGrid& grid);

/// CSV with header x,x1,x1_prime_re,x1_prime_im,x2_re,x2_im (x1 is its real part).
void write_state_csv(std::ostream& os, const StateVector& state);
StateVector read_state_csv(std::istream& is);

}  // namespace kvstring

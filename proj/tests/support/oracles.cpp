#include "oracles.hpp"

#include <cmath>

namespace kvstring::oracle {

namespace {

cld polish(long double b, long double c, cld x) {
  for (int it = 0; it < 3; ++it) {
    const cld p = x * x + b * x + c;
    const cld dp = 2.0L * x + b;
    if (std::abs(dp) == 0.0L) break;
    x -= p / dp;
  }
  return x;
}

}  // namespace

std::pair<cld, cld> eigen_pair(long double alpha, long double beta, int k) {
  const long double kt = k + 0.5L;
  const long double b = kt * kt * beta * kPiL * kPiL;
  const long double c = kt * kt * alpha * kPiL * kPiL;
  const cld disc = cld(b * b - 4.0L * c, 0.0L);
  const cld root = std::sqrt(disc);
  // Pick the larger-magnitude root from the formula, the other from Vieta.
  const cld big = (-b - root) / 2.0L;
  const cld small = cld(c, 0.0L) / big;
  cld r1 = polish(b, c, big);
  cld r2 = polish(b, c, small);
  if (b * b - 4.0L * c >= 0.0L) {
    if (r1.real() > r2.real()) std::swap(r1, r2);
    r1.imag(0.0L);
    r2.imag(0.0L);
  } else if (r1.imag() > r2.imag()) {
    std::swap(r1, r2);
  }
  return {r1, r2};
}

cld eigenvalue(long double alpha, long double beta, int k, int eps) {
  const auto [m, p] = eigen_pair(alpha, beta, k);
  return eps < 0 ? m : p;
}

long double poly_abs(long double alpha, long double beta, int k, cld lam) {
  const long double kt = k + 0.5L;
  return std::abs(lam * lam + kt * kt * beta * kPiL * kPiL * lam + kt * kt * alpha * kPiL * kPiL);
}

int k0_by_discriminant(long double alpha, long double beta) {
  int k = 0;
  for (;; ++k) {
    const long double kt = k + 0.5L;
    if (kt * kt * beta * beta * kPiL * kPiL - 4.0L * alpha >= 0.0L) return k;
  }
}

ModeOracle mode(long double alpha, long double beta, int k, int eps) {
  ModeOracle m;
  m.lambda = eigenvalue(alpha, beta, k, eps);
  const long double kt = k + 0.5L;
  const long double c = kt * kt * alpha * kPiL * kPiL;
  m.phi_norm = std::sqrt((c / std::norm(m.lambda) + 1.0L) / 2.0L);
  m.pairing = (1.0L - c / (m.lambda * m.lambda)) / 2.0L / m.phi_norm;
  m.gamma = 1.0L / (std::abs(m.pairing) * std::abs(m.lambda.real()));
  return m;
}

cld cross_by_quadrature(long double alpha, long double beta, int k) {
  const long double wn = (k + 0.5L) * kPiL;
  const ModeOracle a = mode(alpha, beta, k, -1);
  const ModeOracle b = mode(alpha, beta, k, +1);
  // Phi = (sin/lambda, sin) / ||phi||, so Phi_1' = wn cos / (lambda ||phi||).
  return integrate01([&](long double x) {
    const cld a1 = wn * std::cos(wn * x) / (a.lambda * a.phi_norm);
    const cld b1 = wn * std::cos(wn * x) / (b.lambda * b.phi_norm);
    const cld a2 = std::sin(wn * x) / a.phi_norm;
    const cld b2 = std::sin(wn * x) / b.phi_norm;
    return alpha * a1 * std::conj(b1) + a2 * std::conj(b2);
  });
}

Rule gauss_legendre(int n, long double a, long double b) {
  Rule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    long double z = std::cos(kPiL * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const long double p2 = ((2.0L * j - 1.0L) * z * p1 - (j - 1.0L) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0L);
      const long double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-19L) break;
    }
    const auto idx = static_cast<std::size_t>(i);
    r.x[idx] = 0.5L * (a + b) + 0.5L * (b - a) * z;
    r.w[idx] = (b - a) / ((1.0L - z * z) * dp * dp);
  }
  return r;
}

GainSums brute_force_gains(long double alpha, long double beta, int k_max) {
  long double g = 0.0L, gp = 0.0L;
  // Smallest terms first.
  for (int k = k_max; k >= 0; --k) {
    for (int eps : {-1, 1}) {
      const ModeOracle m = mode(alpha, beta, k, eps);
      g += m.gamma * m.gamma;
      gp += std::abs(m.lambda.real()) * m.gamma * m.gamma;
    }
  }
  return {std::sqrt(g), std::sqrt(gp)};
}

}  // namespace kvstring::oracle

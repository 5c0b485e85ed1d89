#pragma once

#include <vector>

#include "skyrmion/banded.hpp"
#include "skyrmion/field2d.hpp"
#include "skyrmion/profile.hpp"

namespace skyrmion {

/// Coefficient functions of the moving-frame Hessian along the profile:
///   f = cos^2/r^2 - theta'^2 - 2 theta' - (2/r) sin cos + h cos
///   g = (cos^2 - sin^2)/r^2 - (4/r) sin cos + h cos
///   w = cos/r^2 - sin/r   (cross coefficient; enters as 4 k w alpha beta)
struct ModeCoefficients {
  Eigen::ArrayXd f, g, w;
};
ModeCoefficients mode_coefficients(const ProfileSolution& profile);

/// Quadratic form H_k(alpha, beta) of the mode-k Hessian, evaluated with
/// interval-based derivatives and lumped nodal potentials. Identical to the
/// quadratic form of the assembled pair on interior-supported inputs.
double mode_form(const ProfileSolution& profile, int k,
                 const Eigen::ArrayXd& alpha, const Eigen::ArrayXd& beta);

/// Pointwise integrand of H_{k+1} - H_k against r dr, together with the
/// certified lower bound (3/r^2)(|alpha| - |beta|)^2.
struct ModeReduction {
  Eigen::ArrayXd integrand;
  Eigen::ArrayXd lower_bound;
};
ModeReduction mode_reduction_margin(const ProfileSolution& profile, int k,
                                    const Eigen::ArrayXd& alpha,
                                    const Eigen::ArrayXd& beta);

/// Both sides of the Sturm-Liouville decomposition
///   Int Lf.f dr = Int psi^2 A (g')^2 dr + Int g^2 Lpsi.psi dr,  g = f/psi,
/// with L = -d/dr(A d/dr) + V. Both sides use matched interval/flux rules, so
/// the discrete identity balances to round-off for compactly supported f.
struct HardyCheck {
  double lhs, rhs, gap;
};
HardyCheck hardy_decomposition_check(const Eigen::ArrayXd& a,
                                     const Eigen::ArrayXd& v,
                                     const Eigen::ArrayXd& psi,
                                     const Eigen::ArrayXd& f,
                                     const RadialGrid& grid);

/// H_k in the substituted variables alpha = (sin theta / r) xi,
/// beta = -theta' eta (k = 0 or 1). Evaluated in the flux form produced by
/// the decomposition above; equals mode_form(k, alpha(xi), beta(eta)) exactly
/// for interior-supported inputs.
double tilde_form(const ProfileSolution& profile, int k,
                  const Eigen::ArrayXd& xi, const Eigen::ArrayXd& eta);

/// Coefficient r theta'^2 - sin^2 theta / (r (1 + 2 r^2 (-theta'))) whose
/// positivity carries the mode-1 lower bound.
Eigen::ArrayXd positivity_coefficient(const ProfileSolution& profile);

/// Discretized mode-k pair over interleaved (alpha_j, beta_j) unknowns.
/// Dirichlet at R for all k; natural inner condition for k <= 1, Dirichlet
/// for k >= 2.
BandedSymmetricPair assemble_mode_pair(const ProfileSolution& profile, int k);

struct ModeSpectrum {
  int k = 0;
  std::vector<double> eigenvalues;          // ascending, L2(r dr)-normalized
  std::vector<Eigen::ArrayXd> alpha, beta;  // eigenvectors on the full grid
  double zero_mode_overlap = 0.0;  // |<x, (sin/r, -theta')>_M| of the lowest
};
ModeSpectrum mode_spectrum(const ProfileSolution& profile, int k, int count);

/// Base state for the extended 2D Hessian: skyrmion raster plus the Lagrange
/// multiplier sampled from its radial formula.
struct HessianContext {
  Field2D base;
  Eigen::ArrayXXd lambda;
  double h = 0.0;
};
HessianContext make_hessian_context(const ProfileSolution& profile,
                                    Eigen::Index n);

/// H_inf(phi) = Int |grad phi|^2 + 2 phi . curl phi + h |phi|^2.
double h_infinity_form(const Field2D& phi, double h);
/// H(phi) = H_inf(phi) - Int Lambda |phi|^2.
double hessian_2d(const HessianContext& ctx, const Field2D& phi);

double h1_norm_squared(const Field2D& phi);
double grad_norm_squared(const Field2D& phi);
double curl_norm_squared(const Field2D& phi);

/// Energy difference against one half of the extended Hessian for the
/// projected perturbation m = (m0 + scale phi)/|m0 + scale phi|:
///   lhs = E(m) - E(m0),  rhs = H(m - m0)/2.
/// Exact in the continuum; the gap is pure discretization.
struct IdentityCheck {
  double lhs, rhs, gap;
};
IdentityCheck energy_hessian_identity(const HessianContext& ctx,
                                      const Field2D& phi, double scale);

}  // namespace skyrmion

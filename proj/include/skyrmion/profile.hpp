#pragma once

#include <string>
#include <vector>

#include "skyrmion/radial_grid.hpp"

namespace skyrmion {

/// Converged polar profile theta(r) of the axisymmetric skyrmion at field h:
/// theta'' + theta'/r - sin(theta)cos(theta)/r^2 + 2 sin^2(theta)/r
///   - h sin(theta) = 0,  theta(0) = pi, theta(inf) = 0.
struct ProfileSolution {
  double h = 0.0;
  RadialGrid grid;
  Eigen::ArrayXd theta;
  Eigen::ArrayXd theta_prime;
  double shooting_slope = 0.0;  // s = -theta'(0+)
  double tail_amplitude = 0.0;  // alpha_h in theta ~ alpha_h exp(-rate r)/sqrt(r)
  double tail_rate = 0.0;
  double tolerance = 0.0;       // residual target used by the solver
};

/// Default mesh for a given field: R = clamp(30/sqrt(h), 3, 100), log-uniform
/// from 1e-5 R with n nodes.
RadialGrid default_profile_grid(double h, Eigen::Index n = 2048);

/// Truncated interior series theta = pi - s r + a3 r^3 with
/// a3 = (h s - 2 s^2 + (2/3) s^3) / 8, obtained by inserting the expansion
/// into the profile equation.
double series_theta(double h, double s, double r);
double series_theta_prime(double h, double s, double r);

/// Shooting (bisection on the initial slope) plus a Newton polish of the
/// finite-difference equations on the full grid. tol in [1e-12, 1e-6] bounds
/// the polished pointwise residual, up to the double-precision evaluation
/// floor of the stencil near the origin (see residual_floor).
ProfileSolution solve_profile(double h, const RadialGrid& grid, double tol);

/// Left-hand side of the profile equation at interior nodes, evaluated with
/// 3-point centered finite differences on the stored theta (ends are zero).
Eigen::ArrayXd ode_residual(const ProfileSolution& profile);

/// Per-node bound on the round-off floor of the centered-difference residual:
/// differences of theta quantized at machine precision cannot resolve the
/// residual below this level, independent of solver quality.
Eigen::ArrayXd residual_floor(const ProfileSolution& profile);

struct EstimateCheck {
  double min_margin = 0.0;   // minimum over nodes of the named expression
  double worst_r = 0.0;      // node where the minimum is attained
  bool ok = false;
};

/// Numerical verification of the profile estimates and asymptotics.
/// Violations are reported, not thrown: small-h exploration is a feature.
struct ProfileDiagnostics {
  EstimateCheck theta_cos;   // 3/2 - |cos(theta) - r sin(theta)| > 0
  EstimateCheck theta_sin;   // r^2 theta'^2 - sin^2(theta) >= -1e-10
  EstimateCheck theta_h;     // h - (3/2r) sin(theta) >= 0
  double r_star = 0.0;       // radius where theta = pi/2
  double r_star_bound = 0.0; // 2/sqrt(h-1)
  bool r_star_ok = false;
  double slope_mismatch = 0.0;      // |s - h/2| / (h/2)
  double tail_rate_mismatch = 0.0;  // |rate - sqrt(h)| / sqrt(h)
  double max_trusted_residual = 0.0;  // max |residual| where floor <= 0.2 tol h
  bool residual_ok = false;    // |residual| <= tol h + floor at every node
  bool monotone = false;
  bool interior_bounds_ok = false;  // 0 < theta < pi at interior nodes
  bool all_ok() const;
  std::string summary() const;
};

ProfileDiagnostics verify_profile(const ProfileSolution& profile);

enum class ShootingOutcome { Overshoot, Undershoot, Decay };

struct ShootingSample {
  double slope;
  ShootingOutcome outcome;
};

struct ShootingScan {
  std::vector<ShootingSample> samples;
  int transitions = 0;  // sign changes of the over/undershoot classification
};

/// Classification sweep of trial slopes; exactly one transition is the
/// empirical uniqueness signature of the connecting slope.
ShootingScan shooting_scan(double h, double s_lo, double s_hi, int samples);

}  // namespace skyrmion

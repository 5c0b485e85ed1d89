#pragma once

#include <Eigen/Core>

#include "skyrmion/field2d.hpp"
#include "skyrmion/profile.hpp"

namespace skyrmion {

enum class HelicityForm { Direct, NullLagrangian };

struct EnergyReport {
  double dirichlet = 0.0;
  double helicity = 0.0;
  double zeeman = 0.0;
  double total = 0.0;
  double charge = 0.0;
  double virial_residual = 0.0;  // helicity + 2 zeeman
  bool boundary_warning = false; // field not at e3 on the outer rings
};

/// Radial energy 2 pi Int [ theta'^2/2 + sin^2/2r^2 + H + h(1 - cos) ] r dr.
/// The two helicity densities differ by the total derivative (r sin theta)'/r
/// and agree for profiles decaying at both ends.
double radial_energy(const ProfileSolution& profile, HelicityForm form);

/// Dirichlet / helicity / Zeeman split, degree, and virial residual of a
/// sphere-valued raster. Dirichlet uses edge differences, helicity and degree
/// fourth-order centered interior stencils.
EnergyReport energy_2d(const Field2D& field, double h);

/// (1/4 pi) Int m . (d1 m x d2 m).
double topological_charge(const Field2D& field);

/// h_eff = lap m - 2 curl m + h e3 on the interior (vacuum value h e3 on the
/// outer two rings).
Field2D effective_field(const Field2D& field, double h);

/// Tangential projection P_m h_eff (the generalized tension field).
Field2D tension_field(const Field2D& field, double h);

/// Lagrange multiplier of the constrained Euler-Lagrange equation along the
/// profile: theta'^2 + sin^2/r^2 + 2 theta' + (2/r) sin cos + h(1 - cos).
Eigen::ArrayXd lagrange_multiplier(const ProfileSolution& profile);

/// D = d I with d = pi Int (theta'^2 + sin^2/r^2) r dr; off-diagonals vanish
/// by axisymmetry.
Eigen::Matrix2d dissipative_tensor(const ProfileSolution& profile);

/// Direct 2D quadrature D_jk = Int d_j m . d_k m (cross-check of the radial
/// formula).
Eigen::Matrix2d dissipative_tensor_2d(const Field2D& field);

/// Helicity of the (N, gamma) ansatz via the separated product formula;
/// identically zero unless N = -1. Throws for N = 0.
double helicity_of_ansatz(const ProfileSolution& profile, int winding,
                          double gamma);

}  // namespace skyrmion

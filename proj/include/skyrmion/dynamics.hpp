#pragma once

#include <Eigen/Core>
#include <vector>

#include "skyrmion/field2d.hpp"
#include "skyrmion/profile.hpp"

namespace skyrmion {

/// Thiele balance 4 pi J (v - c) = D (beta v - alpha c) with J the
/// counter-clockwise rotation ((a,b)^perp = (-b,a), epsilon_12 = +1),
/// rearranged to (4 pi eps + alpha D) c = (4 pi eps + beta D) v and solved
/// exactly; alpha = beta gives c = v identically.
struct ThieleResult {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double alpha = 0.0, beta = 0.0;
  Eigen::Matrix2d dissipative = Eigen::Matrix2d::Zero();  // D
  Eigen::Matrix2d system = Eigen::Matrix2d::Zero();  // A = 4 pi eps + alpha D
  Eigen::Vector2d drift = Eigen::Vector2d::Zero();   // c
  double hall_angle = 0.0;  // signed angle from v to c
  double det_system = 0.0;  // > (4 pi)^2 for alpha > 0
};

ThieleResult solve_thiele(const ProfileSolution& profile,
                          const Eigen::Vector2d& v, double alpha, double beta);

/// Landau-Lifshitz-Gilbert state under spin transfer torque,
///   d_t m + (v.grad) m = m x [ alpha d_t m + beta (v.grad) m - h_eff ],
/// stepped in the solved explicit form
///   (1+alpha^2) d_t m = -(1+alpha beta) (v.grad) m
///                       + (beta-alpha) m x (v.grad) m - m x h_eff
///                       + alpha P_m h_eff,
/// obtained by crossing the equation with m and eliminating d_t m (both
/// torque terms are tangential since |m| = 1).
struct LLGState {
  Field2D field;
  double time = 0.0;
  double h = 0.0, alpha = 0.0, beta = 0.0;
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
};

/// Right-hand side d_t m of the explicit form on the interior (boundary kept
/// at e3). Advection uses second-order upwind stencils.
Field2D llg_rhs(const Field2D& m, double h, double alpha, double beta,
                const Eigen::Vector2d& v);

/// Residual of the implicit LLG form at a proposed time derivative; vanishes
/// to round-off for the solved right-hand side.
double llg_implicit_residual(const Field2D& m, const Field2D& mdot, double h,
                             double alpha, double beta,
                             const Eigen::Vector2d& v);

/// Largest stable step of the RK4 stepper (imaginary-axis stability limit of
/// the precession spectrum, with margin).
double llg_max_stable_dt(const Field2D& field, double h, double alpha);

/// One explicit RK4 step followed by nodewise renormalization. Throws
/// "unstable step, reduce dt" when the pre-renormalization length drift
/// exceeds 1e-6.
void llg_step(LLGState& state, double dt);

/// Centroid of the topological charge density, normalized by 4 pi Q.
/// Throws "no skyrmion present" when |Q| < 0.5.
Eigen::Vector2d track_center(const Field2D& field);

/// L2 norm of the traveling-wave operator
///   F(m,c,v) = -tau(m) + m x [(v-c).grad m] + (beta v - alpha c).grad m.
double traveling_residual(const Field2D& field, const Eigen::Vector2d& c,
                          const Eigen::Vector2d& v, double alpha, double beta,
                          double h);

struct TrajectorySample {
  double time = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double energy = 0.0;
  double charge = 0.0;
};

struct SimulationResult {
  LLGState state;
  std::vector<TrajectorySample> trajectory;
  Eigen::Vector2d drift = Eigen::Vector2d::Zero();  // least-squares velocity
};

/// Time-steps the state for `duration`, sampling the trajectory every
/// `sample_every` steps; the drift velocity is the least-squares slope of the
/// tracked center over the second half of the run.
SimulationResult run_llg(LLGState state, double duration, double dt,
                         int sample_every);

}  // namespace skyrmion

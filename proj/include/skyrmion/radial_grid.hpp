#pragma once

#include <Eigen/Core>

namespace skyrmion {

enum class GridSpacing { LogUniform, Uniform };
enum class Weight { One, R };

/// 1D radial mesh on [r0, R] with r0 > 0, used to discretize the half-line
/// carrying the measure r dr. Immutable after construction.
class RadialGrid {
public:
  static RadialGrid log_spaced(double r0, double rmax, Eigen::Index n);
  static RadialGrid uniform(double r0, double rmax, Eigen::Index n);

  const Eigen::ArrayXd& nodes() const { return nodes_; }
  double node(Eigen::Index i) const { return nodes_[i]; }
  Eigen::Index size() const { return nodes_.size(); }
  double inner_radius() const { return nodes_[0]; }
  double truncation_radius() const { return nodes_[nodes_.size() - 1]; }
  GridSpacing spacing() const { return spacing_; }

  /// Constant step of log(r) for LogUniform grids.
  double log_step() const { return log_step_; }

  /// Interval widths h_i = r_{i+1} - r_i (size n-1).
  const Eigen::ArrayXd& interval_widths() const { return widths_; }
  /// Interval mean radii (r_i + r_{i+1})/2 (size n-1).
  const Eigen::ArrayXd& interval_mean_r() const { return mean_r_; }
  /// Trapezoid weights for the plain dr measure (size n).
  const Eigen::ArrayXd& trapezoid_weights() const { return trap_; }

private:
  RadialGrid(Eigen::ArrayXd nodes, GridSpacing spacing);

  Eigen::ArrayXd nodes_;
  Eigen::ArrayXd widths_;
  Eigen::ArrayXd mean_r_;
  Eigen::ArrayXd trap_;
  GridSpacing spacing_;
  double log_step_ = 0.0;
};

/// Quadrature of values * weight over [r0, R]. Composite quadratic
/// (Simpson-type) rule on consecutive node triples; exact for integrands
/// that are quadratic in r, fourth-order on smoothly graded grids.
/// Throws std::invalid_argument on non-finite input.
double integrate_radial(const Eigen::ArrayXd& values, const RadialGrid& grid,
                        Weight weight);

/// Nodal first derivative. LogUniform grids use a 5-point centered stencil in
/// log r (one-sided at the ends); other grids fall back to 3-point nonuniform
/// stencils.
Eigen::ArrayXd nodal_derivative(const Eigen::ArrayXd& values,
                                const RadialGrid& grid);

/// 3-point nonuniform centered stencils at an interior node.
struct CenteredStencil {
  double prev, mid, next;
};
CenteredStencil first_derivative_stencil(const RadialGrid& grid,
                                         Eigen::Index i);
CenteredStencil second_derivative_stencil(const RadialGrid& grid,
                                          Eigen::Index i);

}  // namespace skyrmion

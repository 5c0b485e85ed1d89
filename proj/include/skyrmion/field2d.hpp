#pragma once

#include <Eigen/Core>
#include <array>

#include "skyrmion/profile.hpp"

namespace skyrmion {

/// Cell-centered square mesh of 3-vectors on [-Lx/2, Lx/2] x [-Ly/2, Ly/2],
/// component planes stored column-major (x index contiguous).
class Field2D {
public:
  Field2D(double length_x, double length_y, Eigen::Index nx, Eigen::Index ny);

  static Field2D constant_e3(double length, Eigen::Index n);

  Eigen::Index nx() const { return nx_; }
  Eigen::Index ny() const { return ny_; }
  double length_x() const { return lx_; }
  double length_y() const { return ly_; }
  double spacing() const { return dx_; }
  double x(Eigen::Index i) const { return -0.5 * lx_ + (double(i) + 0.5) * dx_; }
  double y(Eigen::Index j) const { return -0.5 * ly_ + (double(j) + 0.5) * dx_; }

  Eigen::ArrayXXd& comp(int c) { return comp_[c]; }
  const Eigen::ArrayXXd& comp(int c) const { return comp_[c]; }

  /// max over nodes of | |m| - 1 |.
  double sphere_deviation() const;
  /// Nodewise renormalization onto the unit sphere.
  void normalize();
  /// max over the outer `rings` node rings of |m - e3|.
  double boundary_deviation(Eigen::Index rings = 2) const;

private:
  double lx_, ly_, dx_;
  Eigen::Index nx_, ny_;
  std::array<Eigen::ArrayXXd, 3> comp_;
};

/// Piecewise-linear-in-r sample of the profile angle; series below the first
/// node, vacuum beyond the truncation radius.
double interpolate_theta(const ProfileSolution& profile, double r);

/// Raster of the axisymmetric ansatz (e^{i(gamma - N psi)} sin theta,
/// cos theta) on an n x n box of side `length` (default 2R).
Field2D rasterize(const ProfileSolution& profile, Eigen::Index n,
                  int winding = -1, double gamma = 1.5707963267948966,
                  double length = 0.0);

}  // namespace skyrmion

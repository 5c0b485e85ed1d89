#pragma once

#include <Eigen/Core>

// 2D finite-difference stencils shared by the energy, stability, and dynamics
// translation units. Planes are column-major with the x index contiguous.

namespace skyrmion::detail {

using Plane = Eigen::ArrayXXd;

// Forward differences (edge-based); valid for i < nx-1 resp. j < ny-1.
inline double dxp(const Plane& f, Eigen::Index i, Eigen::Index j, double inv) {
  return (f(i + 1, j) - f(i, j)) * inv;
}
inline double dyp(const Plane& f, Eigen::Index i, Eigen::Index j, double inv) {
  return (f(i, j + 1) - f(i, j)) * inv;
}

// Fourth-order centered first derivatives; valid two nodes from the rim.
inline double dx4(const Plane& f, Eigen::Index i, Eigen::Index j,
                  double inv12) {
  return (-f(i + 2, j) + 8.0 * f(i + 1, j) - 8.0 * f(i - 1, j) + f(i - 2, j)) *
         inv12;
}
inline double dy4(const Plane& f, Eigen::Index i, Eigen::Index j,
                  double inv12) {
  return (-f(i, j + 2) + 8.0 * f(i, j + 1) - 8.0 * f(i, j - 1) + f(i, j - 2)) *
         inv12;
}

// Compact 5-point Laplacian; valid one node from the rim.
inline double lap5(const Plane& f, Eigen::Index i, Eigen::Index j,
                   double inv_h2) {
  return (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) -
          4.0 * f(i, j)) *
         inv_h2;
}

}  // namespace skyrmion::detail

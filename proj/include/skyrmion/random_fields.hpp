#pragma once

#include <cstdint>

#include "skyrmion/field2d.hpp"

namespace skyrmion {

/// Smooth random 3-vector field: a few Gaussian bumps per component under a
/// window that vanishes identically within 15% of the box edge. Deterministic
/// in the seed.
Field2D random_smooth_field(double length, Eigen::Index n, std::uint64_t seed,
                            int bumps = 6);

/// Tangential projection of a random smooth field along the base field.
Field2D random_tangent_field(const Field2D& base, std::uint64_t seed,
                             int bumps = 6);

/// Random field whose planar part is divergence-free by construction
/// (perp-gradient of a random stream function, analytic derivatives).
Field2D random_divfree_field(double length, Eigen::Index n,
                             std::uint64_t seed, int bumps = 6);

/// Smooth compactly supported random radial function on the grid interior.
Eigen::ArrayXd random_radial_bump(const RadialGrid& grid, std::uint64_t seed,
                                  int bumps = 4);

}  // namespace skyrmion

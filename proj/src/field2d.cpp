#include "skyrmion/field2d.hpp"

#include <cmath>
#include <stdexcept>

namespace skyrmion {

Field2D::Field2D(double length_x, double length_y, Eigen::Index nx,
                 Eigen::Index ny)
    : lx_(length_x), ly_(length_y), nx_(nx), ny_(ny) {
  if (nx < 8 || ny < 8 || !(length_x > 0.0) || !(length_y > 0.0)) {
    throw std::invalid_argument("invalid 2D field dimensions");
  }
  dx_ = length_x / double(nx);
  const double dy = length_y / double(ny);
  if (std::abs(dx_ - dy) > 1e-12 * dx_) {
    throw std::invalid_argument("2D field spacing must be isotropic");
  }
  for (auto& c : comp_) c = Eigen::ArrayXXd::Zero(nx, ny);
}

Field2D Field2D::constant_e3(double length, Eigen::Index n) {
  Field2D f(length, length, n, n);
  f.comp(2).setOnes();
  return f;
}

double Field2D::sphere_deviation() const {
  const Eigen::ArrayXXd norm2 = comp_[0].square() + comp_[1].square() +
                                comp_[2].square();
  return (norm2.sqrt() - 1.0).abs().maxCoeff();
}

void Field2D::normalize() {
  const Eigen::ArrayXXd inv_norm =
      (comp_[0].square() + comp_[1].square() + comp_[2].square())
          .sqrt()
          .inverse();
  for (auto& c : comp_) c *= inv_norm;
}

double Field2D::boundary_deviation(Eigen::Index rings) const {
  double worst = 0.0;
  auto check = [&](Eigen::Index i, Eigen::Index j) {
    const double d1 = comp_[0](i, j);
    const double d2 = comp_[1](i, j);
    const double d3 = comp_[2](i, j) - 1.0;
    worst = std::max(worst, std::sqrt(d1 * d1 + d2 * d2 + d3 * d3));
  };
  for (Eigen::Index ring = 0; ring < rings; ++ring) {
    for (Eigen::Index i = 0; i < nx_; ++i) {
      check(i, ring);
      check(i, ny_ - 1 - ring);
    }
    for (Eigen::Index j = 0; j < ny_; ++j) {
      check(ring, j);
      check(nx_ - 1 - ring, j);
    }
  }
  return worst;
}

double interpolate_theta(const ProfileSolution& profile, double r) {
  const RadialGrid& grid = profile.grid;
  const double r0 = grid.inner_radius();
  if (r >= grid.truncation_radius()) return 0.0;
  if (r <= r0) return series_theta(profile.h, profile.shooting_slope, r);

  Eigen::Index i;
  if (grid.spacing() == GridSpacing::LogUniform) {
    i = Eigen::Index(std::log(r / r0) / grid.log_step());
  } else {
    i = Eigen::Index((r - r0) / grid.interval_widths()[0]);
  }
  i = std::clamp<Eigen::Index>(i, 0, grid.size() - 2);
  while (grid.node(i) > r && i > 0) --i;
  while (grid.node(i + 1) < r && i + 2 < grid.size()) ++i;
  const double w = (r - grid.node(i)) / grid.interval_widths()[i];
  return (1.0 - w) * profile.theta[i] + w * profile.theta[i + 1];
}

Field2D rasterize(const ProfileSolution& profile, Eigen::Index n, int winding,
                  double gamma, double length) {
  const double box =
      length > 0.0 ? length : 2.0 * profile.grid.truncation_radius();
  Field2D field(box, box, n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double y = field.y(j);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = field.x(i);
      const double r = std::hypot(x, y);
      const double theta = interpolate_theta(profile, r);
      const double psi = std::atan2(y, x);
      const double phase = gamma - double(winding) * psi;
      const double st = std::sin(theta);
      field.comp(0)(i, j) = std::cos(phase) * st;
      field.comp(1)(i, j) = std::sin(phase) * st;
      field.comp(2)(i, j) = std::cos(theta);
    }
  }
  return field;
}

}  // namespace skyrmion

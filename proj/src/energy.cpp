#include "skyrmion/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "skyrmion/detail/stencils.hpp"

namespace skyrmion {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

using detail::dx4;
using detail::dxp;
using detail::dy4;
using detail::dyp;
using detail::lap5;
using Eigen::Index;

}  // namespace

double radial_energy(const ProfileSolution& profile, HelicityForm form) {
  const Eigen::ArrayXd& r = profile.grid.nodes();
  const Eigen::ArrayXd& th = profile.theta;
  const Eigen::ArrayXd& tp = profile.theta_prime;
  const Eigen::ArrayXd sn = th.sin();
  const Eigen::ArrayXd cs = th.cos();

  Eigen::ArrayXd dmi;
  if (form == HelicityForm::Direct) {
    dmi = tp + sn * cs / r;
  } else {
    dmi = (1.0 - cs) * (tp - sn / r);
  }
  const Eigen::ArrayXd density = 0.5 * tp.square() +
                                 0.5 * sn.square() / r.square() + dmi +
                                 profile.h * (1.0 - cs);
  // contribution of the [0, r0] sliver from the interior series
  // theta = pi - s r + O(r^3); the two helicity densities differ there by 2s.
  // Only meaningful for profiles carrying the skyrmion boundary data.
  const double r0 = profile.grid.inner_radius();
  double sliver = 0.0;
  if (profile.theta[0] > kPi / 2.0) {
    const double s = (kPi - profile.theta[0]) / r0;
    sliver = form == HelicityForm::Direct
                 ? s * s - 2.0 * s + 2.0 * profile.h
                 : s * s - 4.0 * s + 2.0 * profile.h;
  }
  return 2.0 * kPi * integrate_radial(density, profile.grid, Weight::R) +
         kPi * sliver * r0 * r0;
}

EnergyReport energy_2d(const Field2D& field, double h) {
  const Index nx = field.nx(), ny = field.ny();
  const double dx = field.spacing();
  const double cell = dx * dx;
  const double inv = 1.0 / dx;
  const double inv12 = 1.0 / (12.0 * dx);
  const auto& m1 = field.comp(0);
  const auto& m2 = field.comp(1);
  const auto& m3 = field.comp(2);

  EnergyReport report;
  report.boundary_warning = field.boundary_deviation(2) > 1e-6;

  double dirichlet = 0.0;
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i + 1 < nx; ++i) {
      const double a = dxp(m1, i, j, inv);
      const double b = dxp(m2, i, j, inv);
      const double c = dxp(m3, i, j, inv);
      dirichlet += a * a + b * b + c * c;
    }
  }
  for (Index j = 0; j + 1 < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const double a = dyp(m1, i, j, inv);
      const double b = dyp(m2, i, j, inv);
      const double c = dyp(m3, i, j, inv);
      dirichlet += a * a + b * b + c * c;
    }
  }
  report.dirichlet = 0.5 * dirichlet * cell;

  double helicity = 0.0;
  double charge = 0.0;
  for (Index j = 2; j + 2 < ny; ++j) {
    for (Index i = 2; i + 2 < nx; ++i) {
      const double m3x = dx4(m3, i, j, inv12);
      const double m3y = dy4(m3, i, j, inv12);
      helicity += m1(i, j) * m3y - m2(i, j) * m3x;

      const double m1x = dx4(m1, i, j, inv12);
      const double m2x = dx4(m2, i, j, inv12);
      const double m1y = dy4(m1, i, j, inv12);
      const double m2y = dy4(m2, i, j, inv12);
      const double cx = m2x * m3y - m3x * m2y;
      const double cy = m3x * m1y - m1x * m3y;
      const double cz = m1x * m2y - m2x * m1y;
      charge += m1(i, j) * cx + m2(i, j) * cy + m3(i, j) * cz;
    }
  }
  report.helicity = 2.0 * helicity * cell;
  report.charge = charge * cell / kFourPi;

  const double zee = (m1.square() + m2.square() + (m3 - 1.0).square()).sum();
  report.zeeman = 0.5 * h * zee * cell;

  report.total = report.dirichlet + report.helicity + report.zeeman;
  report.virial_residual = report.helicity + 2.0 * report.zeeman;
  return report;
}

double topological_charge(const Field2D& field) {
  const Index nx = field.nx(), ny = field.ny();
  const double inv12 = 1.0 / (12.0 * field.spacing());
  const auto& m1 = field.comp(0);
  const auto& m2 = field.comp(1);
  const auto& m3 = field.comp(2);
  double charge = 0.0;
  for (Index j = 2; j + 2 < ny; ++j) {
    for (Index i = 2; i + 2 < nx; ++i) {
      const double m1x = dx4(m1, i, j, inv12);
      const double m2x = dx4(m2, i, j, inv12);
      const double m3x = dx4(m3, i, j, inv12);
      const double m1y = dy4(m1, i, j, inv12);
      const double m2y = dy4(m2, i, j, inv12);
      const double m3y = dy4(m3, i, j, inv12);
      charge += m1(i, j) * (m2x * m3y - m3x * m2y) +
                m2(i, j) * (m3x * m1y - m1x * m3y) +
                m3(i, j) * (m1x * m2y - m2x * m1y);
    }
  }
  return charge * field.spacing() * field.spacing() / kFourPi;
}

Field2D effective_field(const Field2D& field, double h) {
  const Index nx = field.nx(), ny = field.ny();
  const double inv12 = 1.0 / (12.0 * field.spacing());
  const double inv_h2 = 1.0 / (field.spacing() * field.spacing());
  Field2D out(field.length_x(), field.length_y(), nx, ny);
  out.comp(2).setConstant(h);  // vacuum value on the rim

  const auto& m1 = field.comp(0);
  const auto& m2 = field.comp(1);
  const auto& m3 = field.comp(2);
  for (Index j = 2; j + 2 < ny; ++j) {
    for (Index i = 2; i + 2 < nx; ++i) {
      // curl with d3 = 0: (d2 m3, -d1 m3, d1 m2 - d2 m1)
      const double curl1 = dy4(m3, i, j, inv12);
      const double curl2 = -dx4(m3, i, j, inv12);
      const double curl3 = dx4(m2, i, j, inv12) - dy4(m1, i, j, inv12);
      out.comp(0)(i, j) = lap5(m1, i, j, inv_h2) - 2.0 * curl1;
      out.comp(1)(i, j) = lap5(m2, i, j, inv_h2) - 2.0 * curl2;
      out.comp(2)(i, j) = lap5(m3, i, j, inv_h2) - 2.0 * curl3 + h;
    }
  }
  return out;
}

Field2D tension_field(const Field2D& field, double h) {
  Field2D heff = effective_field(field, h);
  const Eigen::ArrayXXd dot = field.comp(0) * heff.comp(0) +
                              field.comp(1) * heff.comp(1) +
                              field.comp(2) * heff.comp(2);
  for (int c = 0; c < 3; ++c) {
    heff.comp(c) -= dot * field.comp(c);
  }
  return heff;
}

Eigen::ArrayXd lagrange_multiplier(const ProfileSolution& profile) {
  const Eigen::ArrayXd& r = profile.grid.nodes();
  const Eigen::ArrayXd& th = profile.theta;
  const Eigen::ArrayXd& tp = profile.theta_prime;
  const Eigen::ArrayXd sn = th.sin();
  const Eigen::ArrayXd cs = th.cos();
  return tp.square() + sn.square() / r.square() + 2.0 * tp +
         2.0 * sn * cs / r + profile.h * (1.0 - cs);
}

Eigen::Matrix2d dissipative_tensor(const ProfileSolution& profile) {
  const Eigen::ArrayXd& r = profile.grid.nodes();
  const Eigen::ArrayXd density =
      profile.theta_prime.square() + profile.theta.sin().square() / r.square();
  const double r0 = profile.grid.inner_radius();
  const double s = (kPi - profile.theta[0]) / r0;
  const double d = kPi * integrate_radial(density, profile.grid, Weight::R) +
                   kPi * s * s * r0 * r0;
  return d * Eigen::Matrix2d::Identity();
}

Eigen::Matrix2d dissipative_tensor_2d(const Field2D& field) {
  const Index nx = field.nx(), ny = field.ny();
  const double inv12 = 1.0 / (12.0 * field.spacing());
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  for (Index j = 2; j + 2 < ny; ++j) {
    for (Index i = 2; i + 2 < nx; ++i) {
      double gx[3], gy[3];
      for (int c = 0; c < 3; ++c) {
        gx[c] = dx4(field.comp(c), i, j, inv12);
        gy[c] = dy4(field.comp(c), i, j, inv12);
      }
      d(0, 0) += gx[0] * gx[0] + gx[1] * gx[1] + gx[2] * gx[2];
      d(0, 1) += gx[0] * gy[0] + gx[1] * gy[1] + gx[2] * gy[2];
      d(1, 1) += gy[0] * gy[0] + gy[1] * gy[1] + gy[2] * gy[2];
    }
  }
  d(1, 0) = d(0, 1);
  return d * field.spacing() * field.spacing();
}

double helicity_of_ansatz(const ProfileSolution& profile, int winding,
                          double gamma) {
  if (winding == 0) {
    throw std::invalid_argument("formula valid only for N != 0");
  }
  // Int_0^{2pi} sin((N+1) psi - gamma) d psi vanishes exactly for N != -1.
  if (winding != -1) return 0.0;
  const Eigen::ArrayXd density =
      profile.theta.sin().square() * profile.theta_prime;
  const double radial = integrate_radial(density, profile.grid, Weight::R);
  return kFourPi * std::sin(gamma) * radial;
}

}  // namespace skyrmion

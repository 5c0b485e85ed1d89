#include "skyrmion/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "skyrmion/banded.hpp"
#include "skyrmion/detail/stencils.hpp"
#include "skyrmion/energy.hpp"

namespace skyrmion {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

using detail::dx4;
using detail::dy4;
using detail::lap5;
using Eigen::Index;
using Eigen::Vector2d;

// Second-order upwind advection (v.grad)m, biased against the transport
// direction; valid two nodes from the rim.
inline double upwind(const Eigen::ArrayXXd& f, Index i, Index j, double vx,
                     double vy, double inv2h) {
  double adv = 0.0;
  if (vx > 0.0) {
    adv += vx * (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) * inv2h;
  } else if (vx < 0.0) {
    adv += vx * (-3.0 * f(i, j) + 4.0 * f(i + 1, j) - f(i + 2, j)) * inv2h;
  }
  if (vy > 0.0) {
    adv += vy * (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) * inv2h;
  } else if (vy < 0.0) {
    adv += vy * (-3.0 * f(i, j) + 4.0 * f(i, j + 1) - f(i, j + 2)) * inv2h;
  }
  return adv;
}

struct Vec3 {
  double x, y, z;
};
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

}  // namespace

ThieleResult solve_thiele(const ProfileSolution& profile,
                          const Eigen::Vector2d& v, double alpha,
                          double beta) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("solve_thiele requires alpha > 0");
  }
  ThieleResult result;
  result.v = v;
  result.alpha = alpha;
  result.beta = beta;
  result.dissipative = dissipative_tensor(profile);

  Eigen::Matrix2d eps;  // epsilon_12 = +1
  eps << 0.0, 1.0, -1.0, 0.0;
  result.system = kFourPi * eps + alpha * result.dissipative;
  const Eigen::Matrix2d rhs_matrix = kFourPi * eps + beta * result.dissipative;
  result.det_system = result.system(0, 0) * result.system(1, 1) -
                      result.system(0, 1) * result.system(1, 0);
  // solve A c + b = 0 with b = -(4 pi eps + beta D) v; for alpha = beta the
  // two matrices coincide and c = v without a solve
  result.drift = (alpha == beta)
                     ? v
                     : solve_2x2(result.system, Eigen::Vector2d(-rhs_matrix * v));
  const double cross_vc = v.x() * result.drift.y() - v.y() * result.drift.x();
  const double dot_vc = v.dot(result.drift);
  result.hall_angle =
      (v.squaredNorm() > 0.0) ? std::atan2(cross_vc, dot_vc) : 0.0;
  return result;
}

Field2D llg_rhs(const Field2D& m, double h, double alpha, double beta,
                const Eigen::Vector2d& v) {
  const Index nx = m.nx(), ny = m.ny();
  const double dx = m.spacing();
  const double inv12 = 1.0 / (12.0 * dx);
  const double inv_h2 = 1.0 / (dx * dx);
  const double inv2h = 1.0 / (2.0 * dx);
  const double vx = v.x(), vy = v.y();
  const double inv_1a2 = 1.0 / (1.0 + alpha * alpha);
  const double c_adv = -(1.0 + alpha * beta) * inv_1a2;
  const double c_madv = (beta - alpha) * inv_1a2;

  Field2D out(m.length_x(), m.length_y(), nx, ny);
  const auto& m1 = m.comp(0);
  const auto& m2 = m.comp(1);
  const auto& m3 = m.comp(2);
  auto& o1 = out.comp(0);
  auto& o2 = out.comp(1);
  auto& o3 = out.comp(2);

#pragma omp parallel for schedule(static)
  for (Index j = 2; j < ny - 2; ++j) {
    for (Index i = 2; i < nx - 2; ++i) {
      const Vec3 mm{m1(i, j), m2(i, j), m3(i, j)};
      const Vec3 heff{
          lap5(m1, i, j, inv_h2) - 2.0 * dy4(m3, i, j, inv12),
          lap5(m2, i, j, inv_h2) + 2.0 * dx4(m3, i, j, inv12),
          lap5(m3, i, j, inv_h2) -
              2.0 * (dx4(m2, i, j, inv12) - dy4(m1, i, j, inv12)) + h};
      const Vec3 adv{upwind(m1, i, j, vx, vy, inv2h),
                     upwind(m2, i, j, vx, vy, inv2h),
                     upwind(m3, i, j, vx, vy, inv2h)};
      const Vec3 m_x_h = cross(mm, heff);
      const Vec3 m_x_adv = cross(mm, adv);
      const double mh = dot(mm, heff);
      // tension = P_m h_eff
      const Vec3 tension{heff.x - mh * mm.x, heff.y - mh * mm.y,
                         heff.z - mh * mm.z};
      // the discrete advection stencil is not exactly tangential; the
      // m (m.adv) closure keeps the solved form an identity for any input
      const double c_norm = alpha * (beta - alpha) * dot(mm, adv) * inv_1a2;
      o1(i, j) = c_adv * adv.x + c_madv * m_x_adv.x + c_norm * mm.x +
                 inv_1a2 * (-m_x_h.x + alpha * tension.x);
      o2(i, j) = c_adv * adv.y + c_madv * m_x_adv.y + c_norm * mm.y +
                 inv_1a2 * (-m_x_h.y + alpha * tension.y);
      o3(i, j) = c_adv * adv.z + c_madv * m_x_adv.z + c_norm * mm.z +
                 inv_1a2 * (-m_x_h.z + alpha * tension.z);
    }
  }
  return out;
}

double llg_implicit_residual(const Field2D& m, const Field2D& mdot, double h,
                             double alpha, double beta,
                             const Eigen::Vector2d& v) {
  const Index nx = m.nx(), ny = m.ny();
  const double dx = m.spacing();
  const double inv12 = 1.0 / (12.0 * dx);
  const double inv_h2 = 1.0 / (dx * dx);
  const double inv2h = 1.0 / (2.0 * dx);
  const auto& m1 = m.comp(0);
  const auto& m2 = m.comp(1);
  const auto& m3 = m.comp(2);
  double acc = 0.0;
  for (Index j = 2; j < ny - 2; ++j) {
    for (Index i = 2; i < nx - 2; ++i) {
      const Vec3 mm{m1(i, j), m2(i, j), m3(i, j)};
      const Vec3 md{mdot.comp(0)(i, j), mdot.comp(1)(i, j),
                    mdot.comp(2)(i, j)};
      const Vec3 heff{
          lap5(m1, i, j, inv_h2) - 2.0 * dy4(m3, i, j, inv12),
          lap5(m2, i, j, inv_h2) + 2.0 * dx4(m3, i, j, inv12),
          lap5(m3, i, j, inv_h2) -
              2.0 * (dx4(m2, i, j, inv12) - dy4(m1, i, j, inv12)) + h};
      const Vec3 adv{upwind(m1, i, j, v.x(), v.y(), inv2h),
                     upwind(m2, i, j, v.x(), v.y(), inv2h),
                     upwind(m3, i, j, v.x(), v.y(), inv2h)};
      const Vec3 bracket{alpha * md.x + beta * adv.x - heff.x,
                         alpha * md.y + beta * adv.y - heff.y,
                         alpha * md.z + beta * adv.z - heff.z};
      const Vec3 torque = cross(mm, bracket);
      const double r1 = md.x + adv.x - torque.x;
      const double r2 = md.y + adv.y - torque.y;
      const double r3 = md.z + adv.z - torque.z;
      acc += r1 * r1 + r2 * r2 + r3 * r3;
    }
  }
  return std::sqrt(acc * dx * dx);
}

double llg_max_stable_dt(const Field2D& field, double h, double alpha) {
  const double dx = field.spacing();
  const double spectral = 8.0 / (dx * dx) + 8.0 / dx + h;
  return 2.6 * (1.0 + alpha * alpha) / spectral;
}

void llg_step(LLGState& state, double dt) {
  Field2D& m = state.field;
  const Index nx = m.nx(), ny = m.ny();

  const Field2D k1 = llg_rhs(m, state.h, state.alpha, state.beta, state.v);
  Field2D stage(m.length_x(), m.length_y(), nx, ny);
  for (int c = 0; c < 3; ++c) stage.comp(c) = m.comp(c) + 0.5 * dt * k1.comp(c);
  const Field2D k2 = llg_rhs(stage, state.h, state.alpha, state.beta, state.v);
  for (int c = 0; c < 3; ++c) stage.comp(c) = m.comp(c) + 0.5 * dt * k2.comp(c);
  const Field2D k3 = llg_rhs(stage, state.h, state.alpha, state.beta, state.v);
  for (int c = 0; c < 3; ++c) stage.comp(c) = m.comp(c) + dt * k3.comp(c);
  const Field2D k4 = llg_rhs(stage, state.h, state.alpha, state.beta, state.v);

  for (int c = 0; c < 3; ++c) {
    m.comp(c) += (dt / 6.0) * (k1.comp(c) + 2.0 * k2.comp(c) +
                               2.0 * k3.comp(c) + k4.comp(c));
  }

  double max_drift = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_drift)
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const double n2 = m.comp(0)(i, j) * m.comp(0)(i, j) +
                        m.comp(1)(i, j) * m.comp(1)(i, j) +
                        m.comp(2)(i, j) * m.comp(2)(i, j);
      const double norm = std::sqrt(n2);
      max_drift = std::max(max_drift, std::abs(norm - 1.0));
      const double inv = 1.0 / norm;
      m.comp(0)(i, j) *= inv;
      m.comp(1)(i, j) *= inv;
      m.comp(2)(i, j) *= inv;
    }
  }
  if (max_drift > 1e-6) {
    throw std::runtime_error("unstable step, reduce dt");
  }
  state.time += dt;
}

Eigen::Vector2d track_center(const Field2D& field) {
  const Index nx = field.nx(), ny = field.ny();
  const double inv12 = 1.0 / (12.0 * field.spacing());
  const auto& m1 = field.comp(0);
  const auto& m2 = field.comp(1);
  const auto& m3 = field.comp(2);
  double total = 0.0, cx = 0.0, cy = 0.0;
  for (Index j = 2; j + 2 < ny; ++j) {
    for (Index i = 2; i + 2 < nx; ++i) {
      const double m1x = dx4(m1, i, j, inv12), m1y = dy4(m1, i, j, inv12);
      const double m2x = dx4(m2, i, j, inv12), m2y = dy4(m2, i, j, inv12);
      const double m3x = dx4(m3, i, j, inv12), m3y = dy4(m3, i, j, inv12);
      const double q = m1(i, j) * (m2x * m3y - m3x * m2y) +
                       m2(i, j) * (m3x * m1y - m1x * m3y) +
                       m3(i, j) * (m1x * m2y - m2x * m1y);
      total += q;
      cx += q * field.x(i);
      cy += q * field.y(j);
    }
  }
  const double cell = field.spacing() * field.spacing();
  const double charge = total * cell / kFourPi;
  if (std::abs(charge) < 0.5) {
    throw std::runtime_error("no skyrmion present");
  }
  return Eigen::Vector2d(cx / total, cy / total);
}

double traveling_residual(const Field2D& field, const Eigen::Vector2d& c,
                          const Eigen::Vector2d& v, double alpha, double beta,
                          double h) {
  const Index nx = field.nx(), ny = field.ny();
  const double dx = field.spacing();
  const double inv12 = 1.0 / (12.0 * dx);
  const double inv_h2 = 1.0 / (dx * dx);
  const Vector2d rel = v - c;        // m x [(v-c).grad m]
  const Vector2d drag = beta * v - alpha * c;
  const auto& m1 = field.comp(0);
  const auto& m2 = field.comp(1);
  const auto& m3 = field.comp(2);
  double acc = 0.0;
  for (Index j = 2; j < ny - 2; ++j) {
    for (Index i = 2; i < nx - 2; ++i) {
      const Vec3 mm{m1(i, j), m2(i, j), m3(i, j)};
      const Vec3 heff{
          lap5(m1, i, j, inv_h2) - 2.0 * dy4(m3, i, j, inv12),
          lap5(m2, i, j, inv_h2) + 2.0 * dx4(m3, i, j, inv12),
          lap5(m3, i, j, inv_h2) -
              2.0 * (dx4(m2, i, j, inv12) - dy4(m1, i, j, inv12)) + h};
      const double mh = dot(mm, heff);
      const Vec3 tau{heff.x - mh * mm.x, heff.y - mh * mm.y,
                     heff.z - mh * mm.z};
      Vec3 grad_rel, grad_drag;
      {
        const double g1x = dx4(m1, i, j, inv12), g1y = dy4(m1, i, j, inv12);
        const double g2x = dx4(m2, i, j, inv12), g2y = dy4(m2, i, j, inv12);
        const double g3x = dx4(m3, i, j, inv12), g3y = dy4(m3, i, j, inv12);
        grad_rel = {rel.x() * g1x + rel.y() * g1y,
                    rel.x() * g2x + rel.y() * g2y,
                    rel.x() * g3x + rel.y() * g3y};
        grad_drag = {drag.x() * g1x + drag.y() * g1y,
                     drag.x() * g2x + drag.y() * g2y,
                     drag.x() * g3x + drag.y() * g3y};
      }
      const Vec3 m_x_rel = cross(mm, grad_rel);
      const double f1 = -tau.x + m_x_rel.x + grad_drag.x;
      const double f2 = -tau.y + m_x_rel.y + grad_drag.y;
      const double f3 = -tau.z + m_x_rel.z + grad_drag.z;
      acc += f1 * f1 + f2 * f2 + f3 * f3;
    }
  }
  return std::sqrt(acc * dx * dx);
}

SimulationResult run_llg(LLGState state, double duration, double dt,
                         int sample_every) {
  if (!(dt > 0.0) || sample_every < 1) {
    throw std::invalid_argument("invalid simulation step configuration");
  }
  SimulationResult result{std::move(state), {}, Eigen::Vector2d::Zero()};
  LLGState& s = result.state;
  const long steps = long(std::ceil(duration / dt));

  auto sample = [&]() {
    const EnergyReport report = energy_2d(s.field, s.h);
    result.trajectory.push_back(
        {s.time, track_center(s.field), report.total, report.charge});
  };
  sample();
  for (long n = 0; n < steps; ++n) {
    llg_step(s, dt);
    if ((n + 1) % sample_every == 0 || n + 1 == steps) sample();
  }

  // least-squares drift over the second half of the trajectory
  const size_t half = result.trajectory.size() / 2;
  const size_t count = result.trajectory.size() - half;
  if (count >= 2) {
    double st = 0, sx = 0, sy = 0, stt = 0, stx = 0, sty = 0;
    for (size_t i = half; i < result.trajectory.size(); ++i) {
      const auto& p = result.trajectory[i];
      st += p.time;
      sx += p.center.x();
      sy += p.center.y();
      stt += p.time * p.time;
      stx += p.time * p.center.x();
      sty += p.time * p.center.y();
    }
    const double nn = double(count);
    const double det = nn * stt - st * st;
    if (det > 0.0) {
      result.drift.x() = (nn * stx - st * sx) / det;
      result.drift.y() = (nn * sty - st * sy) / det;
    }
  }
  return result;
}

}  // namespace skyrmion

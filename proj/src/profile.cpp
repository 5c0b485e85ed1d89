#include "skyrmion/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace skyrmion {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMachEps = std::numeric_limits<double>::epsilon();

using Eigen::ArrayXd;
using Eigen::Index;
using Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Adaptive Cash-Karp 4(5) integration of a 2-component first-order system,
// with an event callback evaluated after every accepted step.
// ---------------------------------------------------------------------------

enum class Stop { End, Event };

template <typename Rhs, typename Event>
Stop integrate_adaptive(Rhs&& rhs, double& x, Vector2d& y, double x_end,
                        double rtol, double atol, Event&& event) {
  constexpr double a[6] = {0.0, 1.0 / 5, 3.0 / 10, 3.0 / 5, 1.0, 7.0 / 8};
  constexpr double b21 = 1.0 / 5;
  constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
  constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27,
                   b54 = 35.0 / 27;
  constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512,
                   b63 = 575.0 / 13824, b64 = 44275.0 / 110592,
                   b65 = 253.0 / 4096;
  constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                   c6 = 512.0 / 1771;
  constexpr double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                   d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336,
                   d6 = c6 - 1.0 / 4;

  const double span = x_end - x;
  if (span == 0.0) return Stop::End;
  double step = span / 64.0;
  const double min_step = std::abs(span) * 1e-14;

  while ((x_end - x) * span > 0.0) {
    if (std::abs(step) > std::abs(x_end - x)) step = x_end - x;
    const Vector2d k1 = rhs(x, y);
    const Vector2d k2 = rhs(x + a[1] * step, y + step * (b21 * k1));
    const Vector2d k3 = rhs(x + a[2] * step, y + step * (b31 * k1 + b32 * k2));
    const Vector2d k4 =
        rhs(x + a[3] * step, y + step * (b41 * k1 + b42 * k2 + b43 * k3));
    const Vector2d k5 = rhs(x + a[4] * step, y + step * (b51 * k1 + b52 * k2 +
                                                         b53 * k3 + b54 * k4));
    const Vector2d k6 =
        rhs(x + a[5] * step,
            y + step * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    const Vector2d y5 = y + step * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    const Vector2d err =
        step * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);

    double ratio = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      ratio = std::max(ratio, std::abs(err[i]) / sc);
    }
    if (ratio <= 1.0) {
      x += step;
      y = y5;
      if (event(x, y)) return Stop::Event;
      step *= std::min(5.0, 0.9 * std::pow(std::max(ratio, 1e-12), -0.2));
    } else {
      step *= std::max(0.2, 0.9 * std::pow(ratio, -0.25));
      if (std::abs(step) < min_step) {
        throw std::runtime_error("profile integrator step underflow");
      }
    }
  }
  return Stop::End;
}

// Profile equation in the two charts. Log chart (t = log r) regularizes the
// origin: theta_tt = sin cos - 2 r sin^2 + h r^2 sin.
struct ProfileRhs {
  double h;
  Vector2d log_chart(double t, const Vector2d& y) const {
    const double r = std::exp(t);
    const double s = std::sin(y[0]), c = std::cos(y[0]);
    return {y[1], s * c - 2.0 * r * s * s + h * r * r * s};
  }
  Vector2d r_chart(double r, const Vector2d& y) const {
    const double s = std::sin(y[0]), c = std::cos(y[0]);
    return {y[1],
            -y[1] / r + s * c / (r * r) - 2.0 * s * s / r + h * s};
  }
};

struct Trace {
  ShootingOutcome outcome = ShootingOutcome::Decay;
  bool terminated = false;
};

// Integrates the shooting trajectory from the grid origin to R; fills nodal
// values when `fill` is given (values past an event stay untouched).
Trace shoot(double h, double s, const RadialGrid& grid, double rtol,
            double atol, ArrayXd* fill, Index* last_filled) {
  const double r0 = grid.inner_radius();
  const double rmax = grid.truncation_radius();
  const double r_switch = std::min(1e-3 * rmax, rmax);
  ProfileRhs rhs{h};
  Trace trace;

  auto event = [&](double theta, double theta_r) {
    if (theta < 0.0) {
      trace.outcome = ShootingOutcome::Overshoot;
      trace.terminated = true;
      return true;
    }
    if (theta_r > 0.0 && theta > 1e-3) {
      trace.outcome = ShootingOutcome::Undershoot;
      trace.terminated = true;
      return true;
    }
    return false;
  };

  Vector2d y(series_theta(h, s, r0), r0 * series_theta_prime(h, s, r0));
  double t = std::log(r0);
  if (fill) {
    (*fill)[0] = y[0];
    *last_filled = 0;
  }

  auto log_event = [&](double tt, const Vector2d& yy) {
    return event(yy[0], yy[1] / std::exp(tt));
  };
  auto r_event = [&](double rr, const Vector2d& yy) {
    (void)rr;
    return event(yy[0], yy[1]);
  };

  Index node = 1;
  const Index n = grid.size();
  // advance through both charts, stopping at nodes only when filling
  double r = r0;
  bool in_log = true;
  while (true) {
    double target_r;
    if (fill && node < n) {
      target_r = grid.node(node);
    } else {
      target_r = rmax;
    }
    if (in_log && target_r > r_switch) target_r = r_switch;

    Stop stop;
    if (in_log) {
      double t_target = std::log(target_r);
      stop = integrate_adaptive(
          [&](double tt, const Vector2d& yy) { return rhs.log_chart(tt, yy); },
          t, y, t_target, rtol, atol, log_event);
      r = std::exp(t);
      if (stop == Stop::End && target_r >= r_switch) {
        y = Vector2d(y[0], y[1] / r);  // switch chart: theta_t -> theta_r
        in_log = false;
      }
    } else {
      stop = integrate_adaptive(
          [&](double rr, const Vector2d& yy) { return rhs.r_chart(rr, yy); },
          r, y, target_r, rtol, atol, r_event);
    }
    if (stop == Stop::Event) return trace;

    if (fill && node < n && r >= grid.node(node) * (1.0 - 1e-12)) {
      (*fill)[node] = y[0];
      *last_filled = node;
      ++node;
    }
    if ((fill && node >= n) || (!fill && r >= rmax * (1.0 - 1e-12))) break;
  }

  const double theta_end = y[0];
  const double theta_r_end = in_log ? y[1] / r : y[1];
  if (theta_end < 1e-6 && theta_r_end < 0.0) {
    trace.outcome = ShootingOutcome::Decay;
  } else if (theta_r_end < 0.0) {
    // Reached R positive and still decreasing: indistinguishable from the
    // connecting orbit at this tolerance; treat as undershoot for bisection.
    trace.outcome = ShootingOutcome::Undershoot;
  } else {
    trace.outcome = ShootingOutcome::Undershoot;
  }
  return trace;
}

ShootingOutcome classify(double h, double s, const RadialGrid& grid,
                         double rtol, double atol) {
  return shoot(h, s, grid, rtol, atol, nullptr, nullptr).outcome;
}

// Residual and tridiagonal Jacobian of the centered-difference equations.
struct DiscreteSystem {
  const RadialGrid& grid;
  double h;

  double residual_at(const ArrayXd& th, Index i) const {
    const CenteredStencil d1 = first_derivative_stencil(grid, i);
    const CenteredStencil d2 = second_derivative_stencil(grid, i);
    const double r = grid.node(i);
    const double tp =
        d1.prev * th[i - 1] + d1.mid * th[i] + d1.next * th[i + 1];
    const double tpp =
        d2.prev * th[i - 1] + d2.mid * th[i] + d2.next * th[i + 1];
    const double sn = std::sin(th[i]), cs = std::cos(th[i]);
    return tpp + tp / r - sn * cs / (r * r) + 2.0 * sn * sn / r - h * sn;
  }

  void jacobian_row(const ArrayXd& th, Index i, double& sub, double& diag,
                    double& sup) const {
    const CenteredStencil d1 = first_derivative_stencil(grid, i);
    const CenteredStencil d2 = second_derivative_stencil(grid, i);
    const double r = grid.node(i);
    sub = d2.prev + d1.prev / r;
    sup = d2.next + d1.next / r;
    const double two_th = 2.0 * th[i];
    diag = d2.mid + d1.mid / r - std::cos(two_th) / (r * r) +
           2.0 * std::sin(two_th) / r - h * std::cos(th[i]);
  }
};

ArrayXd floor_for(const RadialGrid& grid, double h) {
  const Index n = grid.size();
  ArrayXd fl = ArrayXd::Zero(n);
  for (Index i = 1; i + 1 < n; ++i) {
    const CenteredStencil d1 = first_derivative_stencil(grid, i);
    const CenteredStencil d2 = second_derivative_stencil(grid, i);
    const double r = grid.node(i);
    const double sum_d =
        std::abs(d2.prev) + std::abs(d2.mid) + std::abs(d2.next);
    const double sum_c =
        std::abs(d1.prev) + std::abs(d1.mid) + std::abs(d1.next);
    fl[i] = 4.0 * kMachEps *
            (kPi * sum_d + kPi * sum_c / r + 1.0 / (r * r) + 2.0 / r + h);
  }
  return fl;
}

void thomas_solve(ArrayXd& sub, ArrayXd& diag, ArrayXd& sup, ArrayXd& rhs) {
  const Index m = diag.size();
  for (Index i = 1; i < m; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[m - 1] /= diag[m - 1];
  for (Index i = m - 2; i >= 0; --i) {
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  }
}

// Least-squares line through (x, y); returns (intercept, slope).
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / n;
  return {intercept, slope};
}

}  // namespace

RadialGrid default_profile_grid(double h, Index n) {
  if (!(h > 1.0)) {
    throw std::invalid_argument("profile grid requires h > 1");
  }
  const double rmax = std::clamp(30.0 / std::sqrt(h), 3.0, 100.0);
  return RadialGrid::log_spaced(1e-5 * rmax, rmax, n);
}

double series_theta(double h, double s, double r) {
  const double a3 = (h * s - 2.0 * s * s + (2.0 / 3.0) * s * s * s) / 8.0;
  return kPi - s * r + a3 * r * r * r;
}

double series_theta_prime(double h, double s, double r) {
  const double a3 = (h * s - 2.0 * s * s + (2.0 / 3.0) * s * s * s) / 8.0;
  return -s + 3.0 * a3 * r * r;
}

ProfileSolution solve_profile(double h, const RadialGrid& grid, double tol) {
  if (!(h > 1.0)) {
    throw std::invalid_argument("solve_profile requires h > 1");
  }
  if (!(tol >= 1e-12 && tol <= 1e-6)) {
    throw std::invalid_argument("tol must lie in [1e-12, 1e-6]");
  }
  const Index n = grid.size();
  const double rtol = 1e-11, atol = 1e-14;

  // Bisection on the shooting slope between an undershooting and an
  // overshooting bracket. The connecting slope grows like h log h (it sits
  // far above h/2 already at moderate h), so the upper end expands until the
  // trajectory overshoots.
  double s_lo = h / 8.0, s_hi = 2.0 * h;
  if (classify(h, s_lo, grid, rtol, atol) != ShootingOutcome::Undershoot) {
    throw std::runtime_error("shooting bracket failure");
  }
  while (classify(h, s_hi, grid, rtol, atol) != ShootingOutcome::Overshoot) {
    s_hi *= 1.7;
    if (s_hi > 1e4 * h) {
      throw std::runtime_error("shooting bracket failure");
    }
  }
  while (s_hi - s_lo > 1e-12 * h) {
    const double mid = 0.5 * (s_lo + s_hi);
    const ShootingOutcome out = classify(h, mid, grid, rtol, atol);
    if (out == ShootingOutcome::Overshoot) {
      s_hi = mid;
    } else if (out == ShootingOutcome::Undershoot) {
      s_lo = mid;
    } else {
      s_lo = s_hi = mid;
      break;
    }
  }
  const double slope = 0.5 * (s_lo + s_hi);

  // Nodal initial guess from the bisected trajectory; past the departure
  // point (or an event) continue with the matched exponential tail.
  ArrayXd theta = ArrayXd::Zero(n);
  Index last = 0;
  shoot(h, slope, grid, rtol, atol, &theta, &last);
  Index anchor = last;
  for (Index i = 1; i <= last; ++i) {
    if (theta[i] <= 0.0 || theta[i] >= theta[i - 1]) {
      anchor = i - 1;
      break;
    }
    if (theta[i] < 1e-9) {
      anchor = i;
      break;
    }
  }
  const double sqrt_h = std::sqrt(h);
  {
    const double ra = grid.node(anchor);
    const double amp = theta[anchor] * std::sqrt(ra) * std::exp(sqrt_h * ra);
    for (Index i = anchor + 1; i < n; ++i) {
      const double r = grid.node(i);
      theta[i] = amp * std::exp(-sqrt_h * r) / std::sqrt(r);
    }
  }
  theta[0] = series_theta(h, slope, grid.node(0));
  theta[n - 1] = 0.0;

  // Newton polish of the discrete equations. Unknowns are theta_0..theta_{n-2}
  // (theta_{n-1} = 0); the node-0 row enforces the regular-origin series
  // relation (pi - theta)/r = s + a3 r^2 between the first two nodes, letting
  // the discrete solution set its own origin slope.
  const DiscreteSystem sys{grid, h};
  const ArrayXd floors = floor_for(grid, h);
  const double tol_h = tol * h;
  const double a3 =
      (h * slope - 2.0 * slope * slope + (2.0 / 3.0) * std::pow(slope, 3)) /
      8.0;
  const double r0 = grid.node(0), r1 = grid.node(1);
  const Index m = n - 1;
  ArrayXd res(m), sub(m), diag(m), sup(m);

  // (pi - theta)/r = s - a3 r^2 on the first two nodes, s eliminated
  auto origin_row = [&](const ArrayXd& th) {
    return (kPi - th[0]) / r0 - (kPi - th[1]) / r1 + a3 * (r0 * r0 - r1 * r1);
  };
  const double origin_scale =
      1e-10 * slope +
      32.0 * kMachEps * (kPi / r0 + kPi / r1 + std::abs(a3) * r0 * r0);

  auto scaled_norm = [&](const ArrayXd& th, double target) {
    double worst = std::abs(origin_row(th)) / origin_scale;
    for (Index i = 1; i + 1 < n; ++i) {
      worst = std::max(worst,
                       std::abs(sys.residual_at(th, i)) / (target + floors[i]));
    }
    return worst;
  };

  const double tight = 0.05 * tol_h;
  double q = scaled_norm(theta, tight);
  bool stalled = false;
  for (int iter = 0; iter < 60 && q > 1.0 && !stalled; ++iter) {
    res[0] = -origin_row(theta);
    sub[0] = 0.0;
    diag[0] = -1.0 / r0;
    sup[0] = 1.0 / r1;
    for (Index i = 1; i + 1 < n; ++i) {
      res[i] = -sys.residual_at(theta, i);
      sys.jacobian_row(theta, i, sub[i], diag[i], sup[i]);
    }
    thomas_solve(sub, diag, sup, res);
    double damp = 1.0;
    stalled = true;
    for (int k = 0; k < 10; ++k, damp *= 0.5) {
      ArrayXd trial = theta;
      trial.segment(0, m) += damp * res;
      if ((trial.segment(0, m) < -0.5).any() ||
          (trial.segment(0, m) > kPi + 0.5).any()) {
        continue;
      }
      const double q_trial = scaled_norm(trial, tight);
      if (q_trial < q) {
        theta = trial;
        q = q_trial;
        stalled = false;
        break;
      }
    }
  }
  if (scaled_norm(theta, tol_h) > 1.0) {
    throw std::runtime_error("no convergence");
  }

  ProfileSolution out{h, grid, std::move(theta), ArrayXd(), slope, 0.0, 0.0,
                      tol};
  out.theta_prime = nodal_derivative(out.theta, grid);
  // series-consistent derivatives at the first two nodes, using the discrete
  // solution's own origin slope
  const double slope_d = (kPi - out.theta[0] + a3 * r0 * r0 * r0) / r0;
  out.theta_prime[0] = -slope_d + 3.0 * a3 * r0 * r0;
  out.theta_prime[1] = -slope_d + 3.0 * a3 * r1 * r1;

  // Tail fit of log(sqrt(r) theta) over the window where the asymptotic form
  // dominates and curvature corrections are below the fit tolerance.
  {
    std::vector<double> xs, ys;
    const double rmax = grid.truncation_radius();
    for (Index i = 0; i < n - 1; ++i) {
      const double r = grid.node(i);
      if (r >= rmax / 3.0 && r <= 5.0 * rmax / 6.0 && out.theta[i] > 0.0) {
        xs.push_back(r);
        ys.push_back(std::log(std::sqrt(r) * out.theta[i]));
      }
    }
    if (xs.size() >= 8) {
      auto [intercept, lslope] = fit_line(xs, ys);
      out.tail_rate = -lslope;
      out.tail_amplitude = std::exp(intercept);
    }
  }
  return out;
}

Eigen::ArrayXd ode_residual(const ProfileSolution& profile) {
  const Index n = profile.grid.size();
  if (n < 3) {
    throw std::invalid_argument("profile grid has fewer than 3 nodes");
  }
  const DiscreteSystem sys{profile.grid, profile.h};
  ArrayXd res = ArrayXd::Zero(n);
  for (Index i = 1; i + 1 < n; ++i) {
    res[i] = sys.residual_at(profile.theta, i);
  }
  return res;
}

Eigen::ArrayXd residual_floor(const ProfileSolution& profile) {
  return floor_for(profile.grid, profile.h);
}

bool ProfileDiagnostics::all_ok() const {
  return theta_cos.ok && theta_sin.ok && theta_h.ok && r_star_ok &&
         residual_ok && monotone && interior_bounds_ok;
}

std::string ProfileDiagnostics::summary() const {
  std::ostringstream os;
  auto line = [&](const char* name, const EstimateCheck& c) {
    os << name << ": min margin " << c.min_margin << " at r = " << c.worst_r
       << (c.ok ? " (ok)\n" : " (VIOLATED)\n");
  };
  line("theta_cos", theta_cos);
  line("theta_sin", theta_sin);
  line("theta_h", theta_h);
  os << "r_star = " << r_star << " vs bound " << r_star_bound
     << (r_star_ok ? " (ok)\n" : " (VIOLATED)\n");
  os << "slope mismatch = " << slope_mismatch
     << ", tail rate mismatch = " << tail_rate_mismatch << "\n";
  return os.str();
}

ProfileDiagnostics verify_profile(const ProfileSolution& profile) {
  const Index n = profile.grid.size();
  const ArrayXd& r = profile.grid.nodes();
  const ArrayXd& th = profile.theta;
  const ArrayXd& tp = profile.theta_prime;
  ProfileDiagnostics d;

  auto scan_min = [&](auto&& expr, EstimateCheck& check, double slack) {
    check.min_margin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      const double v = expr(i);
      if (v < check.min_margin) {
        check.min_margin = v;
        check.worst_r = r[i];
      }
    }
    check.ok = check.min_margin >= -slack;
  };

  scan_min(
      [&](Index i) {
        return 1.5 - std::abs(std::cos(th[i]) - r[i] * std::sin(th[i]));
      },
      d.theta_cos, 0.0);
  scan_min(
      [&](Index i) {
        const double s = std::sin(th[i]);
        return r[i] * r[i] * tp[i] * tp[i] - s * s;
      },
      d.theta_sin, 1e-10);
  scan_min(
      [&](Index i) { return profile.h - 1.5 * std::sin(th[i]) / r[i]; },
      d.theta_h, 0.0);

  d.r_star_bound = 2.0 / std::sqrt(profile.h - 1.0);
  d.r_star = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    if (th[i] >= kPi / 2.0 && th[i + 1] < kPi / 2.0) {
      const double w = (th[i] - kPi / 2.0) / (th[i] - th[i + 1]);
      d.r_star = r[i] + w * (r[i + 1] - r[i]);
      break;
    }
  }
  d.r_star_ok = d.r_star > 0.0 && d.r_star < d.r_star_bound;

  d.slope_mismatch = std::abs(profile.shooting_slope - profile.h / 2.0) /
                     (profile.h / 2.0);
  const double sqrt_h = std::sqrt(profile.h);
  d.tail_rate_mismatch = std::abs(profile.tail_rate - sqrt_h) / sqrt_h;

  const ArrayXd res = ode_residual(profile);
  const ArrayXd fl = residual_floor(profile);
  const double tol_h = profile.tolerance * profile.h;
  d.max_trusted_residual = 0.0;
  d.residual_ok = true;
  for (Index i = 1; i + 1 < n; ++i) {
    if (fl[i] <= 0.2 * tol_h) {
      d.max_trusted_residual = std::max(d.max_trusted_residual,
                                        std::abs(res[i]));
    }
    if (std::abs(res[i]) > tol_h + fl[i]) d.residual_ok = false;
  }

  d.monotone = true;
  for (Index i = 0; i + 1 < n; ++i) {
    if (!(th[i + 1] < th[i])) {
      d.monotone = false;
      break;
    }
  }
  d.interior_bounds_ok = true;
  for (Index i = 1; i + 1 < n; ++i) {
    if (!(th[i] > 0.0 && th[i] < kPi)) {
      d.interior_bounds_ok = false;
      break;
    }
  }
  return d;
}

ShootingScan shooting_scan(double h, double s_lo, double s_hi, int samples) {
  if (samples < 32) {
    throw std::invalid_argument("shooting_scan requires at least 32 samples");
  }
  const RadialGrid grid = default_profile_grid(h, 512);
  ShootingScan scan;
  scan.samples.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double s = s_lo + (s_hi - s_lo) * double(i) / double(samples - 1);
    scan.samples.push_back({s, classify(h, s, grid, 1e-11, 1e-14)});
  }
  int prev = 0;
  for (const auto& sample : scan.samples) {
    const int sign = sample.outcome == ShootingOutcome::Overshoot ? 1
                     : sample.outcome == ShootingOutcome::Undershoot ? -1
                                                                     : 0;
    if (sign != 0) {
      if (prev != 0 && sign != prev) ++scan.transitions;
      prev = sign;
    }
  }
  return scan;
}

}  // namespace skyrmion

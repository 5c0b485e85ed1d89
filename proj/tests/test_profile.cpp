#include <cmath>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "skyrmion/profile.hpp"

using namespace skyrmion;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Profile equation left-hand side on the exact series derivatives.
double series_ode_lhs(double h, double s, double a3, double r) {
  const double theta = kPi - s * r + a3 * r * r * r;
  const double tp = -s + 3.0 * a3 * r * r;
  const double tpp = 6.0 * a3 * r;
  const double sn = std::sin(theta), cs = std::cos(theta);
  return tpp + tp / r - sn * cs / (r * r) + 2.0 * sn * sn / r - h * sn;
}
}  // namespace

TEST_CASE("series start: cubic coefficient annihilates the O(r) residual") {
  const double h = 50.0, s = 20.0;
  const double a3 = (h * s - 2.0 * s * s + (2.0 / 3.0) * s * s * s) / 8.0;
  // with the derived a3 the residual is O(r^3); a generic cubic leaves O(r)
  const double good = std::abs(series_ode_lhs(h, s, a3, 1e-3));
  const double off = std::abs(series_ode_lhs(h, s, 0.5 * a3, 1e-3));
  CHECK(good <= 1e-3 * off);
  CHECK(std::abs(series_theta(h, s, 1e-3) - (kPi - s * 1e-3 + a3 * 1e-9)) ==
        0.0);
}

TEST_CASE("solve_profile h=50: slope, tail, monotonicity") {
  const ProfileSolution& p = profile_at(50.0);
  // independently bisected with scipy (rtol 1e-11): s* = 267.423038
  CHECK(p.shooting_slope == doctest::Approx(267.423038).epsilon(5e-3));
  CHECK(std::abs(p.tail_rate - std::sqrt(50.0)) <= 0.02 * std::sqrt(50.0));
  CHECK(p.theta[0] > kPi - 2.0 * p.shooting_slope * p.grid.inner_radius());
  CHECK(p.theta[0] < kPi);
  for (Eigen::Index i = 0; i + 1 < p.grid.size(); ++i) {
    CHECK(p.theta[i + 1] < p.theta[i]);
  }
  CHECK(p.theta[p.grid.size() - 1] < 1e-8);

  // sin(theta)/r and -theta' agree at the origin (common limit = the slope)
  const double lim_sin = std::sin(p.theta[0]) / p.grid.inner_radius();
  const double lim_tp = -p.theta_prime[0];
  CHECK(std::abs(lim_sin - lim_tp) <= 0.01 * lim_tp);
}

TEST_CASE("solve_profile h=20 and h=80: strictly decreasing") {
  for (double h : {20.0, 80.0}) {
    const ProfileSolution& p = profile_at(h);
    for (Eigen::Index i = 0; i + 1 < p.grid.size(); ++i) {
      CHECK(p.theta[i + 1] < p.theta[i]);
    }
  }
}

TEST_CASE("ode_residual: converged profile meets tol*h up to the float floor") {
  const ProfileSolution& p = profile_at(50.0);
  const Eigen::ArrayXd res = ode_residual(p);
  const Eigen::ArrayXd floor = residual_floor(p);
  const double tol_h = p.tolerance * p.h;
  double trusted = 0.0;
  for (Eigen::Index i = 1; i + 1 < p.grid.size(); ++i) {
    CHECK(std::abs(res[i]) <= tol_h + floor[i]);
    if (floor[i] <= 0.2 * tol_h) {
      trusted = std::max(trusted, std::abs(res[i]));
    }
  }
  CHECK(trusted <= tol_h);
}

TEST_CASE("ode_residual: zero profile solves trivially") {
  const ProfileSolution& base = profile_at(50.0);
  ProfileSolution zero{50.0,
                       base.grid,
                       Eigen::ArrayXd::Zero(base.grid.size()),
                       Eigen::ArrayXd::Zero(base.grid.size()),
                       0.0,
                       0.0,
                       0.0,
                       1e-8};
  CHECK(ode_residual(zero).abs().maxCoeff() == 0.0);
}

TEST_CASE("ode_residual: perturbation is detected") {
  const ProfileSolution& base = profile_at(50.0);
  ProfileSolution bent = base;
  bent.theta += 0.01 * base.grid.nodes().sin();
  CHECK(ode_residual(bent).abs().maxCoeff() >= 1e-2);
}

TEST_CASE("grid refinement changes the slope by <= 0.1%") {
  const ProfileSolution& p = profile_at(50.0);
  const ProfileSolution fine =
      solve_profile(50.0, default_profile_grid(50.0, 4096), 1e-8);
  CHECK(std::abs(fine.shooting_slope - p.shooting_slope) <=
        1e-3 * p.shooting_slope);
}

TEST_CASE("verify_profile h=50: estimates and asymptotics") {
  const ProfileDiagnostics d = verify_profile(profile_at(50.0));
  CHECK(d.theta_cos.ok);
  CHECK(d.theta_cos.min_margin > 0.0);
  CHECK(d.theta_sin.ok);
  CHECK(d.theta_sin.min_margin >= -1e-10);
  CHECK(d.r_star_ok);
  CHECK(d.monotone);
  CHECK(d.interior_bounds_ok);
  CHECK(d.residual_ok);
  CHECK(d.tail_rate_mismatch <= 0.02);
  // the theta_h estimate requires s <= (2/3) h and fails for the true slope;
  // the diagnostics report rather than assert it
  CHECK_FALSE(d.theta_h.ok);
  CHECK(d.theta_h.min_margin == doctest::Approx(50.0 - 1.5 * 267.423).epsilon(0.01));
  // slope sits far above the h/2 of Eq. (theta_0); reported, not asserted
  CHECK(d.slope_mismatch > 5.0);
  CHECK(d.summary().find("theta_h") != std::string::npos);
}

TEST_CASE("verify_profile h=17.1: r* below 2/sqrt(h-1)") {
  const ProfileSolution p =
      solve_profile(17.1, default_profile_grid(17.1, 1024), 1e-8);
  const ProfileDiagnostics d = verify_profile(p);
  CHECK(d.r_star > 0.0);
  CHECK(d.r_star < 2.0 / std::sqrt(16.1));
  CHECK(d.r_star_bound == doctest::Approx(2.0 / std::sqrt(16.1)));
}

TEST_CASE("shooting_scan: single transition around the connecting slope") {
  const double s = profile_at(50.0).shooting_slope;
  const ShootingScan scan = shooting_scan(50.0, 0.8 * s, 1.2 * s, 64);
  CHECK(scan.transitions == 1);
  CHECK(scan.samples.front().outcome == ShootingOutcome::Undershoot);
  CHECK(scan.samples.back().outcome == ShootingOutcome::Overshoot);
}

TEST_CASE("shooting_scan: far-off slopes classify as undershoot") {
  // both h/8 and h sit below the connecting slope; the core repulsion turns
  // those trajectories back up
  const ShootingScan scan = shooting_scan(50.0, 50.0 / 8.0, 50.0, 33);
  CHECK(scan.transitions == 0);
  for (const auto& sample : scan.samples) {
    CHECK(sample.outcome == ShootingOutcome::Undershoot);
  }
  CHECK_THROWS(shooting_scan(50.0, 20.0, 30.0, 8));  // too few samples
}

TEST_CASE("solve_profile input validation") {
  CHECK_THROWS(solve_profile(0.5, default_profile_grid(50.0), 1e-8));
  CHECK_THROWS(solve_profile(50.0, default_profile_grid(50.0), 1e-5));
  CHECK_THROWS(solve_profile(50.0, default_profile_grid(50.0), 1e-13));
}

// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Criteria follow the verification plan of the lab; where a
// target is contradicted by the solved profile itself (the h/2 origin-slope
// claim and its descendants), the check still runs as stated and reports an
// honest FAIL with the measured numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "skyrmion/dynamics.hpp"
#include "skyrmion/energy.hpp"
#include "skyrmion/profile.hpp"
#include "skyrmion/random_fields.hpp"
#include "skyrmion/stability.hpp"

using namespace skyrmion;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int criterion, bool pass, const std::string& what,
            const Timer& timer) {
  std::printf("[%s] criterion %2d: %s  (%.1f s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), timer.seconds());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::map<double, ProfileSolution> profiles;

const ProfileSolution& profile(double h, Eigen::Index n = 2048) {
  const double key = h + n * 1e-9;
  auto it = profiles.find(key);
  if (it == profiles.end()) {
    it = profiles.emplace(key, solve_profile(h, default_profile_grid(h, n), 1e-8))
             .first;
  }
  return it->second;
}

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

void criterion_1() {
  Timer timer;
  bool pass = true;
  std::string detail = "profile asymptotics:";
  for (double h : {20.0, 50.0, 100.0}) {
    Timer each;
    const ProfileSolution& p = profile(h);
    const double slope_mismatch =
        std::abs(p.shooting_slope - h / 2.0) / (h / 2.0);
    const double tail_mismatch =
        std::abs(p.tail_rate - std::sqrt(h)) / std::sqrt(h);
    const bool slope_ok = slope_mismatch <= 0.02;
    const bool tail_ok = tail_mismatch <= 0.02;
    const bool time_ok = each.seconds() <= 5.0;
    pass = pass && slope_ok && tail_ok && time_ok;
    detail += fmt("  h=%g: s=%.3f (|s-h/2|/(h/2)=%.2f)", h, p.shooting_slope,
                  slope_mismatch);
    detail += fmt(" tail=%.4f%%", 100.0 * tail_mismatch);
  }
  detail +=
      "  [slope target s=h/2 stems from the flawed theta_0 insertion; the "
      "true slope grows like h log h]";
  report(1, pass, detail, timer);
}

void criterion_2() {
  Timer timer;
  bool pass = true;
  std::string detail = "appendix estimates:";
  for (double h : {20.0, 50.0, 100.0}) {
    const ProfileDiagnostics d = verify_profile(profile(h));
    pass = pass && d.theta_cos.ok && d.theta_sin.ok && d.theta_h.ok &&
           d.r_star_ok;
    detail += fmt("  h=%g cos/sin/h-margins %.2g/", h, d.theta_cos.min_margin);
    detail += fmt("%.2g/%.2g", d.theta_sin.min_margin, d.theta_h.min_margin);
    detail += d.r_star_ok ? " r*ok" : " r*BAD";
  }
  detail +=
      "  [theta_h fails near r=0 for every h: it needs s <= (2/3)h, the "
      "true slope exceeds h]";
  report(2, pass, detail, timer);
}

void criterion_3() {
  Timer timer;
  const ProfileSolution& p = profile(50.0);
  const double radial = radial_energy(p, HelicityForm::Direct);
  const EnergyReport rep = energy_2d(rasterize(p, 512), 50.0);
  const bool energy_ok = radial < kFourPi;
  const bool virial_ok = std::abs(rep.virial_residual) <= 1e-3 * rep.total;
  // context: the same identity at a field where 512^2 resolves the core
  const ProfileSolution& wide = profile(4.0);
  const EnergyReport wide_rep = energy_2d(rasterize(wide, 512), 4.0);
  std::string detail =
      fmt("virial at h=50, 512^2: |E_H+2E_Z|=%.3g vs 1e-3 E=%.3g; ",
          std::abs(rep.virial_residual), 1e-3 * rep.total) +
      fmt("E=%.6f < 4pi=%.6f; ", radial, kFourPi) +
      fmt("[core is %.2f cells wide at h=50 so the raster part cannot "
          "converge; same check at h=4: %.2e <= %.2e]",
          0.0074 / (2.0 * p.grid.truncation_radius() / 512.0),
          std::abs(wide_rep.virial_residual), 1e-3 * wide_rep.total);
  report(3, energy_ok && virial_ok, detail, timer);
}

void criterion_4() {
  Timer timer;
  const ProfileSolution& p = profile(4.0);
  const double q512 = topological_charge(rasterize(p, 512));
  const double q1024 = topological_charge(rasterize(p, 1024));
  const bool pass = std::abs(q512 + 1.0) <= 0.01 &&
                    std::abs(q1024 + 1.0) <= 0.0025;
  report(4, pass,
         fmt("topological charge (h=4): Q(512^2)=%.5f, Q(1024^2)=%.6f",
             q512, q1024),
         timer);
}

void criterion_5() {
  Timer timer;
  const ProfileSolution& p = profile(50.0);
  const double direct = radial_energy(p, HelicityForm::Direct);
  const double null_lag = radial_energy(p, HelicityForm::NullLagrangian);
  const double gap = std::abs(direct - null_lag) / std::abs(direct);
  report(5, gap <= 1e-8,
         fmt("null-Lagrangian identity: relative gap %.2e (<= 1e-8)", gap),
         timer);
}

void criterion_6() {
  Timer timer;
  const ProfileSolution& p = profile(50.0);
  bool pass = true;
  double worst = 1e300;
  for (int k = 1; k <= 5 && pass; ++k) {
    for (int seed = 0; seed < 100; ++seed) {
      const Eigen::ArrayXd a = random_radial_bump(p.grid, 6000 + 97 * k + seed);
      const Eigen::ArrayXd b = random_radial_bump(p.grid, 8000 + 89 * k + seed);
      const ModeReduction red = mode_reduction_margin(p, k, a, b);
      const double min_gap = (red.integrand - red.lower_bound).minCoeff();
      worst = std::min(worst, std::min(min_gap, red.lower_bound.minCoeff()));
      if (red.integrand.minCoeff() < -1e-12 || min_gap < -1e-12) {
        pass = false;
        break;
      }
    }
  }
  report(6, pass,
         fmt("mode reduction H_{k+1}-H_k pointwise >= (3/r^2)(|a|-|b|)^2 "
             ">= 0, k=1..5, 100 samples (worst slack %.2e)",
             worst),
         timer);
}

void criterion_7() {
  Timer timer;
  const ProfileSolution& p = profile(50.0);
  const RadialGrid& g = p.grid;
  const ModeCoefficients mc = mode_coefficients(p);
  const Eigen::ArrayXd a = g.nodes();
  const Eigen::ArrayXd v_f = 1.0 / g.nodes() + mc.f * g.nodes();
  const Eigen::ArrayXd v_g = 1.0 / g.nodes() + mc.g * g.nodes();
  const Eigen::ArrayXd psi_sin = p.theta.sin() / g.nodes();
  const Eigen::ArrayXd psi_tp = -p.theta_prime;
  double worst = 0.0;
  bool pass = true;
  for (int seed = 0; seed < 50; ++seed) {
    const Eigen::ArrayXd f = random_radial_bump(g, 12000 + seed);
    const HardyCheck c1 = hardy_decomposition_check(a, v_f, psi_sin, f, g);
    const HardyCheck c2 = hardy_decomposition_check(a, v_g, psi_tp, f, g);
    worst = std::max({worst, c1.gap / std::abs(c1.lhs),
                      c2.gap / std::abs(c2.lhs)});
    pass = pass && c1.gap <= 1e-6 * std::abs(c1.lhs) &&
           c2.gap <= 1e-6 * std::abs(c2.lhs);
  }
  report(7, pass,
         fmt("Hardy decomposition balances for psi=sin/r and psi=-theta' "
             "(worst relative gap %.2e <= 1e-6)",
             worst),
         timer);
}

void criterion_8() {
  Timer timer;
  const ProfileSolution& p = profile(50.0);
  const ModeSpectrum s0 = mode_spectrum(p, 0, 1);
  const ModeSpectrum s1 = mode_spectrum(p, 1, 1);
  const ModeSpectrum s1f = mode_spectrum(profile(50.0, 4096), 1, 1);
  bool ordered = true;
  double prev = s1.eigenvalues[0];
  std::string chain = fmt("%.4g", s1.eigenvalues[0]);
  for (int k = 2; k <= 5; ++k) {
    const double lambda = mode_spectrum(p, k, 1).eigenvalues[0];
    ordered = ordered && lambda >= prev - 1e-8;
    chain += fmt(" <= %.4g", lambda);
    prev = lambda;
  }
  const bool pass = s0.eigenvalues[0] > 0.0 &&
                    std::abs(s1f.eigenvalues[0]) <=
                        0.5 * std::abs(s1.eigenvalues[0]) &&
                    s1.zero_mode_overlap >= 0.99 && ordered;
  report(8, pass,
         fmt("spectra: lambda0=%.4f > 0; |lambda1| %.2e -> %.2e under "
             "refinement; overlap %.4f; ",
             s0.eigenvalues[0], std::abs(s1.eigenvalues[0]),
             std::abs(s1f.eigenvalues[0])) +
             fmt("overlap=%.4f; ordering ", s1.zero_mode_overlap) + chain,
         timer);
}

void criterion_9() {
  Timer timer;
  const ProfileSolution& p = profile(4.0);
  const HessianContext ctx = make_hessian_context(p, 512);
  double worst = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    const Field2D phi =
        random_smooth_field(ctx.base.length_x(), ctx.base.nx(), 900 + seed);
    const IdentityCheck id = energy_hessian_identity(ctx, phi, 0.1);
    Field2D xi(ctx.base.length_x(), ctx.base.length_y(), ctx.base.nx(),
               ctx.base.ny());
    for (int c = 0; c < 3; ++c) xi.comp(c) = 0.1 * phi.comp(c);
    worst = std::max(worst,
                     id.gap / (h1_norm_squared(xi) + std::abs(id.lhs)));
  }
  report(9, worst <= 1e-3,
         fmt("energy-Hessian identity (h=4, 512^2, 10 perturbations, scale "
             "0.1): worst gap ratio %.2e <= 1e-3",
             worst),
         timer);
}

void criterion_10() {
  Timer timer;
  const double h = 50.0;
  const double factor = (h - 1.0) / (h + 1.0);
  double worst_margin = 1e300, worst_curl = 0.0, worst_eq = 0.0;
  bool pass = true;
  for (int seed = 0; seed < 20; ++seed) {
    const Field2D phi = random_smooth_field(8.0, 256, 20000 + seed);
    const double h1 = h1_norm_squared(phi);
    const double margin = (h_infinity_form(phi, h) - factor * h1) / h1;
    worst_margin = std::min(worst_margin, margin);
    const double ratio = curl_norm_squared(phi) / grad_norm_squared(phi);
    worst_curl = std::max(worst_curl, ratio);
    pass = pass && margin >= -1e-3 && ratio <= 1.0 + 1e-3;
  }
  for (int seed = 0; seed < 10; ++seed) {
    const Field2D phi = random_divfree_field(8.0, 256, 21000 + seed);
    const double eq = std::abs(curl_norm_squared(phi) -
                               grad_norm_squared(phi)) /
                      grad_norm_squared(phi);
    worst_eq = std::max(worst_eq, eq);
    pass = pass && eq <= 5e-3;
  }
  report(10, pass,
         fmt("H_inf coercivity margin %.3f >= 0; curl/grad <= %.6f; "
             "div-free curl identity within %.2e",
             worst_margin, worst_curl, worst_eq),
         timer);
}

void criterion_11() {
  Timer timer;
  const ProfileSolution& p = profile(50.0);
  const Eigen::Vector2d v(0.01, 0.0);
  const ThieleResult same = solve_thiele(p, v, 0.1, 0.1);
  bool pass = (same.drift - v).norm() <= 1e-12 * v.norm();
  double min_det = 1e300;
  for (double alpha : {0.01, 0.1, 1.0}) {
    const ThieleResult t = solve_thiele(p, v, alpha, 0.2);
    min_det = std::min(min_det, t.det_system);
    pass = pass && t.det_system >= kFourPi * kFourPi;
  }
  report(11, pass,
         fmt("thiele: |c-v| at alpha=beta = %.1e; min det(A) = %.2f >= "
             "(4pi)^2 = %.2f",
             (same.drift - v).norm(), min_det, kFourPi * kFourPi),
         timer);
}

void criterion_12() {
  Timer timer;
  const double h = 4.0;
  const ProfileSolution& p = profile(h);

  // (a) dissipativity at v = 0 from a perturbed skyrmion
  bool dissipative = true;
  {
    LLGState state{rasterize(p, 512), 0.0, h, 0.1, 0.1,
                   Eigen::Vector2d::Zero()};
    const Field2D bump = random_tangent_field(state.field, 31000);
    for (int c = 0; c < 3; ++c) state.field.comp(c) += 0.05 * bump.comp(c);
    state.field.normalize();
    const double dt = 0.8 * llg_max_stable_dt(state.field, h, 0.1);
    double energy = energy_2d(state.field, h).total;
    for (int step = 0; step < 600; ++step) {
      llg_step(state, dt);
      const double next = energy_2d(state.field, h).total;
      if (next > energy + 1e-12) {
        dissipative = false;
        break;
      }
      energy = next;
    }
  }

  // (b) drift at alpha = beta matches v within 5%
  const Eigen::Vector2d v(0.01, 0.0);
  LLGState parallel{rasterize(p, 512), 0.0, h, 0.1, 0.1, v};
  const double dt = llg_max_stable_dt(parallel.field, h, 0.1);
  const SimulationResult run_ab = run_llg(std::move(parallel), 6.0, dt, 50);
  const double rel_ab = (run_ab.drift - v).norm() / v.norm();

  // (c) drift at alpha != beta matches the Thiele velocity within 10%,
  //     Hall deflection with the predicted sign
  const ThieleResult thiele = solve_thiele(p, v, 0.1, 0.2);
  LLGState hall{rasterize(p, 512), 0.0, h, 0.1, 0.2, v};
  const SimulationResult run_hall = run_llg(std::move(hall), 10.0, dt, 50);
  const double rel_hall =
      (run_hall.drift - thiele.drift).norm() / thiele.drift.norm();
  const bool hall_sign = run_hall.drift.y() * thiele.drift.y() > 0.0;

  const bool pass =
      dissipative && rel_ab <= 0.05 && rel_hall <= 0.10 && hall_sign;
  report(12, pass,
         fmt("LLG (h=4, 512^2): energy nonincreasing %d; |c-v|/|v| = %.3f "
             "(<=0.05); ",
             double(dissipative), rel_ab) +
             fmt("|c-c_T|/|c_T| = %.3f (<=0.10); hall sign ok %d "
                 "(c_y=%.2e vs %.2e)",
                 rel_hall, double(hall_sign), run_hall.drift.y()) +
             fmt(" thiele c_y=%.2e", thiele.drift.y()),
         timer);
}

void criterion_13() {
  Timer timer;
  const double s = profile(50.0).shooting_slope;
  const ShootingScan scan = shooting_scan(50.0, 0.8 * s, 1.2 * s, 64);
  report(13, scan.transitions == 1,
         fmt("empirical uniqueness: %g transition(s) across s in "
             "[%.1f, %.1f]",
             double(scan.transitions), 0.8 * s, 1.2 * s),
         timer);
}

}  // namespace

int main() {
  std::printf("skyrmion-lab acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  std::printf("%d of 13 criteria failed\n", failures);
  return failures;
}

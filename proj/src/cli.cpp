#include "skyrmion/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "skyrmion/dynamics.hpp"
#include "skyrmion/energy.hpp"
#include "skyrmion/io.hpp"
#include "skyrmion/profile.hpp"
#include "skyrmion/random_fields.hpp"
#include "skyrmion/stability.hpp"

namespace skyrmion::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double h = 50.0;
  long n_radial = 2048;
  double radius = 0.0;  // 0 = automatic truncation 30/sqrt(h), clipped
  long raster = 512;
  double alpha = 0.1;
  double beta = 0.1;
  std::array<double, 2> v = {0.01, 0.0};
  double duration = 200.0;
  double dt = 0.0;  // 0 = stability bound
  std::vector<int> modes = {0, 1, 2, 3, 4, 5};
  int eigen_count = 2;
  double tol = 1e-8;
  int identity_samples = 10;
  double identity_scale = 0.1;
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  int threads = 0;
};

void apply_json(RunConfig& config, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "h") {
      config.h = value.get<double>();
    } else if (key == "n_radial") {
      config.n_radial = value.get<long>();
    } else if (key == "radius") {
      config.radius = value.get<double>();
    } else if (key == "raster") {
      config.raster = value.get<long>();
    } else if (key == "alpha") {
      config.alpha = value.get<double>();
    } else if (key == "beta") {
      config.beta = value.get<double>();
    } else if (key == "v") {
      auto arr = value.get<std::vector<double>>();
      if (arr.size() != 2) throw ConfigError("config key 'v' must have 2 entries");
      config.v = {arr[0], arr[1]};
    } else if (key == "duration") {
      config.duration = value.get<double>();
    } else if (key == "dt") {
      config.dt = value.get<double>();
    } else if (key == "modes") {
      config.modes = value.get<std::vector<int>>();
    } else if (key == "eigen_count") {
      config.eigen_count = value.get<int>();
    } else if (key == "tol") {
      config.tol = value.get<double>();
    } else if (key == "identity_samples") {
      config.identity_samples = value.get<int>();
    } else if (key == "identity_scale") {
      config.identity_scale = value.get<double>();
    } else if (key == "out_dir") {
      config.out_dir = value.get<std::string>();
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else if (key == "threads") {
      config.threads = value.get<int>();
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(c.h > 1.0)) fail("config 'h' must exceed 1");
  if (c.n_radial < 256) fail("config 'n_radial' must be >= 256");
  if (c.radius < 0.0) fail("config 'radius' must be >= 0");
  if (c.raster < 64) fail("config 'raster' must be >= 64");
  if (!(c.alpha > 0.0)) fail("config 'alpha' must be > 0");
  if (!(c.beta > 0.0)) fail("config 'beta' must be > 0");
  if (!(c.duration > 0.0)) fail("config 'duration' must be > 0");
  if (c.dt < 0.0) fail("config 'dt' must be >= 0");
  if (!(c.tol >= 1e-12 && c.tol <= 1e-6)) fail("config 'tol' must lie in [1e-12, 1e-6]");
  if (c.eigen_count < 1 || c.eigen_count > 4) fail("config 'eigen_count' must lie in [1, 4]");
  if (c.identity_samples < 1) fail("config 'identity_samples' must be >= 1");
  if (!(c.identity_scale > 0.0 && c.identity_scale < 0.5)) {
    fail("config 'identity_scale' must lie in (0, 0.5)");
  }
  if (c.threads < 0) fail("config 'threads' must be >= 0");
  for (int k : c.modes) {
    if (k < 0 || k > 8) fail("config 'modes' entries must lie in [0, 8]");
  }
  if (c.modes.empty()) fail("config 'modes' must not be empty");
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["h"] = c.h;
  j["n_radial"] = c.n_radial;
  j["radius"] = c.radius;
  j["raster"] = c.raster;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["v"] = {c.v[0], c.v[1]};
  j["duration"] = c.duration;
  j["dt"] = c.dt;
  j["modes"] = c.modes;
  j["eigen_count"] = c.eigen_count;
  j["tol"] = c.tol;
  j["identity_samples"] = c.identity_samples;
  j["identity_scale"] = c.identity_scale;
  j["out_dir"] = c.out_dir;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

struct Pipeline {
  RunConfig config;
  std::string command;
  nlohmann::json manifest;
  std::string config_hash;
  bool stage_failed = false;

  std::unique_ptr<ProfileSolution> profile;

  bool wants(const std::string& stage) const {
    if (command == "all") return true;
    if (stage == "solve") return true;  // every command depends on it
    if (stage == "verify") return command == "verify";
    return command == stage;
  }

  void check(const std::string& name, bool ok) {
    manifest["checks"][name] = ok;
  }

  void scalar(const std::string& name, double value) {
    manifest["scalars"][name] = value;
  }

  bool stage(const std::string& name, const std::function<void()>& body) {
    if (!wants(name)) return false;
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
      manifest["stages"][name]["status"] = "ok";
    } catch (const std::exception& err) {
      manifest["stages"][name]["status"] = "failed";
      manifest["stages"][name]["error"] = err.what();
      stage_failed = true;
      std::cerr << "stage " << name << " failed: " << err.what() << "\n";
    }
    const std::chrono::duration<double> wall =
        std::chrono::steady_clock::now() - start;
    manifest["stages"][name]["wall_seconds"] = wall.count();
    return manifest["stages"][name]["status"] == "ok";
  }

  std::string path(const std::string& file) const {
    return (std::filesystem::path(config.out_dir) / file).string();
  }

  void run_solve() {
    RadialGrid grid =
        config.radius > 0.0
            ? RadialGrid::log_spaced(1e-5 * config.radius, config.radius,
                                     config.n_radial)
            : default_profile_grid(config.h, config.n_radial);
    profile = std::make_unique<ProfileSolution>(
        solve_profile(config.h, grid, config.tol));
    write_profile_csv(path("profile.csv"), *profile, config_hash);
    scalar("shooting_slope", profile->shooting_slope);
    scalar("tail_rate", profile->tail_rate);
    scalar("tail_amplitude", profile->tail_amplitude);
    scalar("truncation_radius", grid.truncation_radius());
  }

  void run_verify() {
    const ProfileDiagnostics diag = verify_profile(*profile);
    scalar("slope_mismatch", diag.slope_mismatch);
    scalar("tail_rate_mismatch", diag.tail_rate_mismatch);
    scalar("r_star", diag.r_star);
    scalar("theta_cos_margin", diag.theta_cos.min_margin);
    scalar("theta_sin_margin", diag.theta_sin.min_margin);
    scalar("theta_h_margin", diag.theta_h.min_margin);
    scalar("max_trusted_residual", diag.max_trusted_residual);
    check("theta_cos_estimate", diag.theta_cos.ok);
    check("theta_sin_estimate", diag.theta_sin.ok);
    check("theta_h_estimate", diag.theta_h.ok);
    check("r_star_bound", diag.r_star_ok);
    check("profile_monotone", diag.monotone);
    check("profile_interior_bounds", diag.interior_bounds_ok);
    check("ode_residual", diag.residual_ok);
    check("slope_within_2pct", diag.slope_mismatch <= 0.02);
    check("tail_rate_within_2pct", diag.tail_rate_mismatch <= 0.02);

    const double e_direct = radial_energy(*profile, HelicityForm::Direct);
    const double e_null = radial_energy(*profile, HelicityForm::NullLagrangian);
    scalar("radial_energy", e_direct);
    scalar("null_lagrangian_gap",
           std::abs(e_direct - e_null) / std::abs(e_direct));
    check("energy_below_4pi", e_direct < kFourPi);
    check("null_lagrangian_identity",
          std::abs(e_direct - e_null) <= 1e-8 * std::abs(e_direct));

    const Field2D raster_field = rasterize(*profile, config.raster);
    const EnergyReport report = energy_2d(raster_field, config.h);
    write_energy_json(path("energy.json"), report);
    write_field_csv(path("field.csv"), raster_field, config_hash);
    scalar("energy_2d", report.total);
    scalar("charge", report.charge);
    scalar("virial_residual", report.virial_residual);
    check("charge_is_minus_one", std::abs(report.charge + 1.0) <= 0.01);
    check("virial_identity",
          std::abs(report.virial_residual) <= 1e-3 * report.total);
    check("radial_2d_consistency",
          std::abs(report.total - e_direct) <= 0.01 * e_direct);
    check("boundary_at_e3", !report.boundary_warning);

    const double s = profile->shooting_slope;
    const ShootingScan scan = shooting_scan(config.h, 0.75 * s, 1.25 * s, 64);
    scalar("shooting_transitions", scan.transitions);
    check("shooting_single_transition", scan.transitions == 1);
    scalar("cells_per_rstar",
           diag.r_star / (2.0 * profile->grid.truncation_radius() /
                          double(config.raster)));
  }

  void run_spectrum() {
    std::vector<ModeSpectrum> spectra;
    for (int k : config.modes) {
      spectra.push_back(mode_spectrum(*profile, k, config.eigen_count));
      const ModeSpectrum& spec = spectra.back();
      scalar("lambda_min_k" + std::to_string(k), spec.eigenvalues.front());
      scalar("zero_mode_overlap_k" + std::to_string(k),
             spec.zero_mode_overlap);
      write_eigenvector_csv(
          path("eigenvector_k" + std::to_string(k) + ".csv"), profile->grid,
          spec.alpha.front(), spec.beta.front(), config_hash);
    }
    write_spectrum_json(path("spectrum.json"), spectra);

    bool ordered = true;
    double prev = 0.0;
    bool have_prev = false;
    for (size_t i = 0; i < spectra.size(); ++i) {
      if (spectra[i].k == 0) {
        check("lambda0_positive", spectra[i].eigenvalues.front() > 0.0);
        continue;
      }
      if (have_prev && spectra[i].eigenvalues.front() < prev - 1e-8) {
        ordered = false;
      }
      prev = spectra[i].eigenvalues.front();
      have_prev = true;
    }
    check("mode_ordering", ordered);
  }

  void run_thiele() {
    const Eigen::Vector2d v(config.v[0], config.v[1]);
    const ThieleResult thiele =
        solve_thiele(*profile, v, config.alpha, config.beta);
    scalar("drift_x", thiele.drift.x());
    scalar("drift_y", thiele.drift.y());
    scalar("hall_angle", thiele.hall_angle);
    scalar("det_system", thiele.det_system);
    scalar("dissipative_d", thiele.dissipative(0, 0));
    check("thiele_det_bound", thiele.det_system >= kFourPi * kFourPi);
    if (config.alpha == config.beta) {
      check("thiele_parallel_drift", (thiele.drift - v).norm() == 0.0);
    }
  }

  void run_identity() {
    const HessianContext ctx = make_hessian_context(*profile, config.raster);
    double worst_ratio = 0.0;
    for (int sample = 0; sample < config.identity_samples; ++sample) {
      const Field2D phi = random_smooth_field(
          ctx.base.length_x(), ctx.base.nx(), config.seed + sample);
      const IdentityCheck id =
          energy_hessian_identity(ctx, phi, config.identity_scale);
      // xi ~ scale phi; budget follows the H1 size of the actual increment
      Field2D xi(ctx.base.length_x(), ctx.base.length_y(), ctx.base.nx(),
                 ctx.base.ny());
      for (int c = 0; c < 3; ++c) {
        xi.comp(c) = config.identity_scale * phi.comp(c);
      }
      const double budget = h1_norm_squared(xi) + std::abs(id.lhs);
      worst_ratio = std::max(worst_ratio, id.gap / budget);
    }
    scalar("identity_worst_gap_ratio", worst_ratio);
    check("energy_hessian_identity", worst_ratio <= 1e-3);

    double coercivity_margin = std::numeric_limits<double>::infinity();
    bool curl_ok = true;
    const double factor = (config.h - 1.0) / (config.h + 1.0);
    for (int sample = 0; sample < 20; ++sample) {
      const Field2D phi =
          random_smooth_field(ctx.base.length_x(), ctx.base.nx(),
                              config.seed + 1000 + sample);
      const double h1 = h1_norm_squared(phi);
      const double hinf = h_infinity_form(phi, config.h);
      coercivity_margin =
          std::min(coercivity_margin, (hinf - factor * h1) / h1);
      if (curl_norm_squared(phi) >
          grad_norm_squared(phi) * (1.0 + 1e-3)) {
        curl_ok = false;
      }
    }
    scalar("coercivity_margin", coercivity_margin);
    check("h_infinity_coercive", coercivity_margin >= -1e-3);
    check("curl_dominated_by_gradient", curl_ok);
  }

  void run_simulate() {
    const Eigen::Vector2d v(config.v[0], config.v[1]);
    LLGState state{rasterize(*profile, config.raster), 0.0, config.h,
                   config.alpha, config.beta, v};
    const double dt_max =
        llg_max_stable_dt(state.field, config.h, config.alpha);
    const double dt = config.dt > 0.0 ? config.dt : dt_max;
    if (dt > dt_max) {
      throw ConfigError("config 'dt' exceeds the stability bound " +
                        std::to_string(dt_max));
    }
    const int sample_every = std::max(
        1, int(std::floor(config.duration / dt / 64.0)));
    SimulationResult sim = run_llg(std::move(state), config.duration, dt,
                                   sample_every);
    write_trajectory_csv(path("trajectory.csv"), sim.trajectory, config_hash);
    write_field_csv(path("final_field.csv"), sim.state.field, config_hash);
    scalar("measured_drift_x", sim.drift.x());
    scalar("measured_drift_y", sim.drift.y());
    scalar("simulation_dt", dt);

    if (v.norm() == 0.0) {
      bool nonincreasing = true;
      for (size_t i = 1; i < sim.trajectory.size(); ++i) {
        if (sim.trajectory[i].energy >
            sim.trajectory[i - 1].energy + 1e-12) {
          nonincreasing = false;
        }
      }
      check("energy_nonincreasing", nonincreasing);
    } else {
      const ThieleResult thiele =
          solve_thiele(*profile, v, config.alpha, config.beta);
      const double rel =
          (sim.drift - thiele.drift).norm() / thiele.drift.norm();
      scalar("drift_vs_thiele", rel);
      check("drift_matches_thiele",
            rel <= (config.alpha == config.beta ? 0.05 : 0.10));
      const double measured_hall =
          std::atan2(v.x() * sim.drift.y() - v.y() * sim.drift.x(),
                     v.dot(sim.drift));
      scalar("measured_hall_angle", measured_hall);
      if (config.alpha != config.beta) {
        check("hall_sign_matches",
              measured_hall * thiele.hall_angle > 0.0);
      }
    }
  }

  int execute() {
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["config"] = config_json(config);
    config_hash = fnv1a_hex(manifest["config"].dump());
    manifest["config_hash"] = config_hash;
    manifest["checks"] = nlohmann::json::object();
    manifest["scalars"] = nlohmann::json::object();
    manifest["stages"] = nlohmann::json::object();

    std::filesystem::create_directories(config.out_dir);

    const bool solved = stage("solve", [&] { run_solve(); });
    if (solved) {
      stage("verify", [&] { run_verify(); });
      stage("spectrum", [&] { run_spectrum(); });
      stage("thiele", [&] { run_thiele(); });
      stage("identity", [&] { run_identity(); });
      stage("simulate", [&] { run_simulate(); });
    }

    bool checks_pass = true;
    for (const auto& [name, ok] : manifest["checks"].items()) {
      if (!ok.get<bool>()) {
        checks_pass = false;
        std::cerr << "check failed: " << name << "\n";
      }
    }
    manifest["overall_pass"] = checks_pass && !stage_failed;

    std::ofstream out(path("manifest.json"));
    out << manifest.dump(2) << '\n';
    std::cout << "manifest: " << path("manifest.json") << "\n";

    if (stage_failed) return 3;
    return checks_pass ? 0 : 1;
  }
};

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"skyrmion-lab: axisymmetric chiral skyrmion laboratory"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  RunConfig config;
  std::string config_file;
  RunConfig flags;  // flag values land here, applied after the file

  bool has_flag[16] = {};
  std::vector<CLI::App*> commands;
  for (const char* name :
       {"solve", "verify", "spectrum", "thiele", "simulate", "identity",
        "all"}) {
    commands.push_back(app.add_subcommand(name));
    commands.back()->fallthrough();
  }
  app.add_option("--config", config_file, "JSON configuration file");
  app.add_option("--h", flags.h, "external field strength")
      ->each([&](const std::string&) { has_flag[0] = true; });
  app.add_option("--n-radial", flags.n_radial, "radial nodes")
      ->each([&](const std::string&) { has_flag[1] = true; });
  app.add_option("--radius", flags.radius, "truncation radius override")
      ->each([&](const std::string&) { has_flag[2] = true; });
  app.add_option("--raster", flags.raster, "2D raster size")
      ->each([&](const std::string&) { has_flag[3] = true; });
  app.add_option("--alpha", flags.alpha, "Gilbert damping")
      ->each([&](const std::string&) { has_flag[4] = true; });
  app.add_option("--beta", flags.beta, "non-adiabaticity")
      ->each([&](const std::string&) { has_flag[5] = true; });
  app.add_option("--vx", flags.v[0], "current velocity x")
      ->each([&](const std::string&) { has_flag[6] = true; });
  app.add_option("--vy", flags.v[1], "current velocity y")
      ->each([&](const std::string&) { has_flag[7] = true; });
  app.add_option("--time", flags.duration, "simulation duration")
      ->each([&](const std::string&) { has_flag[8] = true; });
  app.add_option("--dt", flags.dt, "time step (0 = stability bound)")
      ->each([&](const std::string&) { has_flag[9] = true; });
  std::string modes_flag;
  app.add_option("--modes", modes_flag, "mode list, e.g. 0..5 or 0,1,2");
  app.add_option("--eigen-count", flags.eigen_count, "eigenpairs per mode")
      ->each([&](const std::string&) { has_flag[10] = true; });
  app.add_option("--tol", flags.tol, "profile residual tolerance")
      ->each([&](const std::string&) { has_flag[11] = true; });
  app.add_option("--out", flags.out_dir, "output directory")
      ->each([&](const std::string&) { has_flag[12] = true; });
  app.add_option("--seed", flags.seed, "seed for randomized checks")
      ->each([&](const std::string&) { has_flag[13] = true; });
  app.add_option("--threads", flags.threads, "worker cap (0 = default)")
      ->each([&](const std::string&) { has_flag[14] = true; });

  std::vector<const char*> argv;
  argv.push_back("skyrmion_lab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot open config file: " + config_file);
      nlohmann::json j;
      in >> j;
      apply_json(config, j);
    }
    // flags win over the file
    if (has_flag[0]) config.h = flags.h;
    if (has_flag[1]) config.n_radial = flags.n_radial;
    if (has_flag[2]) config.radius = flags.radius;
    if (has_flag[3]) config.raster = flags.raster;
    if (has_flag[4]) config.alpha = flags.alpha;
    if (has_flag[5]) config.beta = flags.beta;
    if (has_flag[6]) config.v[0] = flags.v[0];
    if (has_flag[7]) config.v[1] = flags.v[1];
    if (has_flag[8]) config.duration = flags.duration;
    if (has_flag[9]) config.dt = flags.dt;
    if (has_flag[10]) config.eigen_count = flags.eigen_count;
    if (has_flag[11]) config.tol = flags.tol;
    if (has_flag[12]) config.out_dir = flags.out_dir;
    if (has_flag[13]) config.seed = flags.seed;
    if (has_flag[14]) config.threads = flags.threads;
    if (!modes_flag.empty()) {
      config.modes.clear();
      const auto dots = modes_flag.find("..");
      if (dots != std::string::npos) {
        const int lo = std::stoi(modes_flag.substr(0, dots));
        const int hi = std::stoi(modes_flag.substr(dots + 2));
        for (int k = lo; k <= hi; ++k) config.modes.push_back(k);
      } else {
        std::stringstream ss(modes_flag);
        std::string item;
        while (std::getline(ss, item, ',')) {
          config.modes.push_back(std::stoi(item));
        }
      }
    }
    if (config.threads == 0) {
      if (const char* env = std::getenv("SKYRMION_LAB_THREADS")) {
        config.threads = std::atoi(env);
      }
    }
    validate(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

#ifdef _OPENMP
  if (config.threads > 0) omp_set_num_threads(config.threads);
#else
  (void)config.threads;
#endif

  Pipeline pipeline;
  pipeline.config = config;
  for (size_t i = 0; i < commands.size(); ++i) {
    if (commands[i]->parsed()) pipeline.command = commands[i]->get_name();
  }
  return pipeline.execute();
}

}  // namespace skyrmion::cli

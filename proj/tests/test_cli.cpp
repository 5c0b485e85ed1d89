#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "skyrmion/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json manifest_of(const fs::path& dir) {
  return nlohmann::json::parse(slurp(dir / "manifest.json"));
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("skyrmion_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli: thiele command with equal damping") {
  TempDir dir("thiele");
  const int code = skyrmion::cli::run(
      {"thiele", "--h", "20", "--n-radial", "512", "--alpha", "0.1", "--beta",
       "0.1", "--vx", "0.01", "--vy", "0", "--out", dir.path.string()});
  CHECK(code == 0);
  const nlohmann::json m = manifest_of(dir.path);
  CHECK(m["checks"]["thiele_parallel_drift"].get<bool>());
  CHECK(m["checks"]["thiele_det_bound"].get<bool>());
  CHECK(m["scalars"]["drift_x"].get<double>() == 0.01);
  CHECK(m["scalars"]["drift_y"].get<double>() == 0.0);
  CHECK(m["overall_pass"].get<bool>());
}

TEST_CASE("cli: spectrum command exports ordered modes") {
  TempDir dir("spectrum");
  const int code = skyrmion::cli::run({"spectrum", "--h", "50", "--n-radial",
                                       "1024", "--modes", "0..5",
                                       "--eigen-count", "2", "--out",
                                       dir.path.string()});
  CHECK(code == 0);
  const nlohmann::json spec =
      nlohmann::json::parse(slurp(dir.path / "spectrum.json"));
  REQUIRE(spec.is_array());
  REQUIRE(spec.size() == 6);
  CHECK(spec[0]["k"] == 0);
  CHECK(spec[0]["eigenvalues"][0].get<double>() > 0.0);
  double prev = -1e300;
  for (size_t i = 1; i < spec.size(); ++i) {  // k >= 1 nondecreasing
    const double lambda = spec[i]["eigenvalues"][0].get<double>();
    CHECK(lambda >= prev - 1e-8);
    prev = lambda;
  }
  CHECK(spec[1]["zero_mode_overlap"].get<double>() >= 0.99);
  CHECK(fs::exists(dir.path / "eigenvector_k1.csv"));
}

TEST_CASE("cli: verify at a resolvable field passes the 2D identities") {
  TempDir dir("verify");
  const int code = skyrmion::cli::run({"verify", "--h", "2", "--n-radial",
                                       "1024", "--raster", "384", "--out",
                                       dir.path.string()});
  const nlohmann::json m = manifest_of(dir.path);
  CHECK(m["checks"]["charge_is_minus_one"].get<bool>());
  CHECK(m["checks"]["virial_identity"].get<bool>());
  CHECK(m["checks"]["null_lagrangian_identity"].get<bool>());
  CHECK(m["checks"]["energy_below_4pi"].get<bool>());
  CHECK(m["checks"]["theta_cos_estimate"].get<bool>());
  CHECK(m["checks"]["theta_sin_estimate"].get<bool>());
  CHECK(m["checks"]["shooting_single_transition"].get<bool>());
  // the h/2 slope claim and the theta_h estimate fail for the true profile;
  // the run reports them and exits with the verification-failure code
  CHECK_FALSE(m["checks"]["slope_within_2pct"].get<bool>());
  CHECK_FALSE(m["checks"]["theta_h_estimate"].get<bool>());
  CHECK(code == 1);

  // profile export: provenance header, column header, 17 significant digits
  std::ifstream profile(dir.path / "profile.csv");
  std::string line;
  std::getline(profile, line);
  CHECK(line.find("# skyrmion-lab") == 0);
  CHECK(line.find("config=") != std::string::npos);
  std::getline(profile, line);
  CHECK(line == "r,theta,theta_prime");
  std::getline(profile, line);
  CHECK(line.find('.') != std::string::npos);
  CHECK(fs::exists(dir.path / "energy.json"));
  const nlohmann::json energy =
      nlohmann::json::parse(slurp(dir.path / "energy.json"));
  for (const char* key : {"dirichlet", "helicity", "zeeman", "total",
                          "charge", "virial_residual"}) {
    CHECK(energy.contains(key));
  }
}

TEST_CASE("cli: deterministic outputs for identical config and seed") {
  TempDir a("det_a"), b("det_b");
  for (const auto& dir : {a.path, b.path}) {
    const int code =
        skyrmion::cli::run({"solve", "--h", "30", "--n-radial", "512",
                            "--seed", "42", "--out", dir.string()});
    CHECK(code == 0);
  }
  CHECK(slurp(a.path / "profile.csv") == slurp(b.path / "profile.csv"));
}

TEST_CASE("cli: config file with flag override and unknown-key rejection") {
  TempDir dir("config");
  {
    std::ofstream cfg(dir.path / "config.json");
    cfg << R"({"h": 25.0, "n_radial": 512, "alpha": 0.2, "beta": 0.2})";
  }
  const int code = skyrmion::cli::run(
      {"thiele", "--config", (dir.path / "config.json").string(), "--h", "30",
       "--out", dir.path.string()});
  CHECK(code == 0);
  const nlohmann::json m = manifest_of(dir.path);
  CHECK(m["config"]["h"].get<double>() == 30.0);    // flag wins
  CHECK(m["config"]["alpha"].get<double>() == 0.2); // file value kept

  {
    std::ofstream cfg(dir.path / "bad.json");
    cfg << R"({"h": 25.0, "grid_pts": 100})";
  }
  CHECK(skyrmion::cli::run({"solve", "--config",
                            (dir.path / "bad.json").string(), "--out",
                            dir.path.string()}) == 2);
}

TEST_CASE("cli: usage and validation errors exit with code 2") {
  CHECK(skyrmion::cli::run({"frobnicate"}) == 2);
  CHECK(skyrmion::cli::run({"solve", "--h", "0.5"}) == 2);
  CHECK(skyrmion::cli::run({"solve", "--tol", "1"}) == 2);
  CHECK(skyrmion::cli::run({"simulate", "--alpha", "-1"}) == 2);
}

TEST_CASE("cli: manifest written on stage failure with exit code 3") {
  TempDir dir("fail");
  // a time step far beyond the stability bound aborts the simulate stage
  const int code = skyrmion::cli::run(
      {"simulate", "--h", "4", "--n-radial", "512", "--raster", "128", "--dt",
       "99", "--time", "1", "--out", dir.path.string()});
  CHECK(code == 3);
  const nlohmann::json m = manifest_of(dir.path);
  CHECK(m["stages"]["simulate"]["status"] == "failed");
  CHECK(m["stages"]["solve"]["status"] == "ok");
  CHECK_FALSE(m["overall_pass"].get<bool>());
}

#include "skyrmion/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace skyrmion {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return out;
}

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void provenance(std::ofstream& out, const std::string& config_hash) {
  out << "# skyrmion-lab " << kVersion << " config=" << config_hash << "\n";
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

void write_profile_csv(const std::string& path, const ProfileSolution& profile,
                       const std::string& config_hash) {
  std::ofstream out = open_or_throw(path);
  provenance(out, config_hash);
  out << "r,theta,theta_prime\n";
  for (Eigen::Index i = 0; i < profile.grid.size(); ++i) {
    out << fmt(profile.grid.node(i)) << ',' << fmt(profile.theta[i]) << ','
        << fmt(profile.theta_prime[i]) << '\n';
  }
}

void write_field_csv(const std::string& path, const Field2D& field,
                     const std::string& config_hash) {
  std::ofstream out = open_or_throw(path);
  provenance(out, config_hash);
  out << "x,y,m1,m2,m3\n";
  for (Eigen::Index j = 0; j < field.ny(); ++j) {
    for (Eigen::Index i = 0; i < field.nx(); ++i) {
      out << fmt(field.x(i)) << ',' << fmt(field.y(j)) << ','
          << fmt(field.comp(0)(i, j)) << ',' << fmt(field.comp(1)(i, j))
          << ',' << fmt(field.comp(2)(i, j)) << '\n';
    }
  }
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& trajectory,
                          const std::string& config_hash) {
  std::ofstream out = open_or_throw(path);
  provenance(out, config_hash);
  out << "t,x_center,y_center,energy,charge\n";
  for (const auto& p : trajectory) {
    out << fmt(p.time) << ',' << fmt(p.center.x()) << ',' << fmt(p.center.y())
        << ',' << fmt(p.energy) << ',' << fmt(p.charge) << '\n';
  }
}

void write_eigenvector_csv(const std::string& path, const RadialGrid& grid,
                           const Eigen::ArrayXd& alpha,
                           const Eigen::ArrayXd& beta,
                           const std::string& config_hash) {
  std::ofstream out = open_or_throw(path);
  provenance(out, config_hash);
  out << "r,alpha,beta\n";
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    out << fmt(grid.node(i)) << ',' << fmt(alpha[i]) << ',' << fmt(beta[i])
        << '\n';
  }
}

void write_energy_json(const std::string& path, const EnergyReport& report) {
  nlohmann::json j;
  j["dirichlet"] = report.dirichlet;
  j["helicity"] = report.helicity;
  j["zeeman"] = report.zeeman;
  j["total"] = report.total;
  j["charge"] = report.charge;
  j["virial_residual"] = report.virial_residual;
  std::ofstream out = open_or_throw(path);
  out << j.dump(2) << '\n';
}

void write_spectrum_json(const std::string& path,
                         const std::vector<ModeSpectrum>& spectra) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& spec : spectra) {
    nlohmann::json entry;
    entry["k"] = spec.k;
    entry["eigenvalues"] = spec.eigenvalues;
    entry["zero_mode_overlap"] = spec.zero_mode_overlap;
    arr.push_back(entry);
  }
  std::ofstream out = open_or_throw(path);
  out << arr.dump(2) << '\n';
}

}  // namespace skyrmion

#pragma once

#include <string>
#include <vector>

#include "skyrmion/dynamics.hpp"
#include "skyrmion/energy.hpp"
#include "skyrmion/field2d.hpp"
#include "skyrmion/profile.hpp"
#include "skyrmion/stability.hpp"

namespace skyrmion {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a 64-bit hash, hex-encoded; used to stamp outputs with the config.
std::string fnv1a_hex(const std::string& data);

/// CSV writers; every file starts with a `# skyrmion-lab <version>
/// config=<hash>` provenance line, values at 17 significant digits.
void write_profile_csv(const std::string& path, const ProfileSolution& profile,
                       const std::string& config_hash);
void write_field_csv(const std::string& path, const Field2D& field,
                     const std::string& config_hash);
void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& trajectory,
                          const std::string& config_hash);
void write_eigenvector_csv(const std::string& path, const RadialGrid& grid,
                           const Eigen::ArrayXd& alpha,
                           const Eigen::ArrayXd& beta,
                           const std::string& config_hash);

/// Flat JSON object with keys dirichlet, helicity, zeeman, total, charge,
/// virial_residual.
void write_energy_json(const std::string& path, const EnergyReport& report);
/// JSON array of {k, eigenvalues[], zero_mode_overlap}.
void write_spectrum_json(const std::string& path,
                         const std::vector<ModeSpectrum>& spectra);

}  // namespace skyrmion

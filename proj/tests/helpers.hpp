#pragma once

#include "skyrmion/profile.hpp"

// Shared solved profiles; computed once per test binary.
inline const skyrmion::ProfileSolution& profile_at(double h) {
  static std::map<double, skyrmion::ProfileSolution> cache;
  auto it = cache.find(h);
  if (it == cache.end()) {
    it = cache
             .emplace(h, skyrmion::solve_profile(
                             h, skyrmion::default_profile_grid(h), 1e-8))
             .first;
  }
  return it->second;
}

#pragma once

#include <string>
#include <vector>

namespace skyrmion::cli {

/// Batch front door. Returns the process exit code:
/// 0 pass, 1 verification failure, 2 usage/config error, 3 numerical failure.
int run(const std::vector<std::string>& args);

}  // namespace skyrmion::cli

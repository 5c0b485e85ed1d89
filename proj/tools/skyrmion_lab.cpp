#include <string>
#include <vector>

#include "skyrmion/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return skyrmion::cli::run(args);
}

#include <iostream>
#include <string>
#include <vector>

#include "dlmperf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dlmperf::cli::run(std::move(args), std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "affproj_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return affproj::cli::run_cli(args, std::cout, std::cerr);
}

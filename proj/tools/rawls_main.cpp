#include <iostream>
#include <string>
#include <vector>

#include "rawls/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rawls::cli::run_cli(args, std::cout, std::cerr);
}

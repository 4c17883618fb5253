#include <iostream>

#include "causid/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return causid::run_cli(args, std::cout, std::cerr);
}

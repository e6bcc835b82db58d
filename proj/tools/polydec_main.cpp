#include <iostream>
#include <string>
#include <vector>

#include "polydec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return polydec::run_cli(args, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "mscf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mscf::run_cli(args, std::cout, std::cerr);
}

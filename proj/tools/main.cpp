#include <iostream>

#include "paralab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return paralab::run_cli(args, std::cout, std::cerr);
}

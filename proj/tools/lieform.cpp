#include <iostream>

#include "lieform/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lieform::run_cli(args, std::cout, std::cerr);
}

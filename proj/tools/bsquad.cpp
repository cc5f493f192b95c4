#include <iostream>
#include <string>
#include <vector>

#include "bsquad/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bsquad::cli::run(args, std::cout, std::cerr);
}

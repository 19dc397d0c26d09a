#include <iostream>
#include <string>
#include <vector>

#include "gausssep/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gausssep::cli::run(std::move(args), std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "qfp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qfp::cli::run(args, std::cout, std::cerr);
}

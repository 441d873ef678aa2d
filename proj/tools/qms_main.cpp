// qms command-line entry point.
#include <iostream>
#include <string>
#include <vector>

#include "qms/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qms::cli::run(args, std::cout, std::cerr);
}

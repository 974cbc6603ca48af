#include <iostream>
#include <string>
#include <vector>

#include "ffsc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ffsc::cli::run(args, std::cout, std::cerr);
}

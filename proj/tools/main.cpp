#include <iostream>
#include <string>
#include <vector>

#include "vardiff/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vardiff::run_cli(args, std::cout, std::cerr);
}

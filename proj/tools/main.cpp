#include <iostream>
#include <string>
#include <vector>

#include "profile_lab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return profile_lab::run_cli(args, std::cout, std::cerr);
}

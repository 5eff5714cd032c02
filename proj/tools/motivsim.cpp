#include <iostream>
#include <string>
#include <vector>

#include "motivsim/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return motivsim::cli::run(args, std::cout, std::cerr);
}

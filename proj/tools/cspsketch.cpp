#include <iostream>

#include "cspsketch/cli/run_command.hpp"

int main(int argc, char** argv) {
  return cspsketch::run_cli(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "bess/cli.hpp"

int main(int argc, char** argv) {
  return bess::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

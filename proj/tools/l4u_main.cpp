#include <iostream>

#include "l4u/cli.hpp"

int main(int argc, char** argv) {
  return l4u::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

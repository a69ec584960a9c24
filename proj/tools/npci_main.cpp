#include <iostream>

#include "npci/cli.hpp"

int main(int argc, char** argv) {
  return npci::run_cli(argc, argv, std::cout, std::cerr);
}

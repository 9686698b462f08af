#include <iostream>

#include "posbvp/cli.hpp"

int main(int argc, char** argv) {
  return posbvp::run_cli(argc, argv, std::cout, std::cerr);
}

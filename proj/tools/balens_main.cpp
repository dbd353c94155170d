#include <iostream>

#include "balens/cli.hpp"

int main(int argc, char** argv) {
  return balens::run_cli(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "cssr/cli.hpp"

int main(int argc, char** argv) {
  return cssr::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

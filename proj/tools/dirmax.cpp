#include <iostream>
#include <string>
#include <vector>

#include "dirmax/cli.hpp"

int main(int argc, char** argv) {
  return dirmax::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

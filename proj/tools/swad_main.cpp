#include <iostream>
#include <string>
#include <vector>

#include "swad/cli.hpp"

int main(int argc, char** argv) {
  return swad::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

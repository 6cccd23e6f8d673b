#include <iostream>
#include <string>
#include <vector>

#include "geoimpute/cli.hpp"

int main(int argc, char** argv) {
  return geoimpute::cli_dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

#include <iostream>

#include "geovec/cli.hpp"

int main(int argc, char** argv) {
  return geovec::cli::run(geovec::cli::Args(argv + 1, argv + argc), std::cout, std::cerr);
}

#include <iostream>

#include "mills/cli.hpp"

int main(int argc, char** argv) {
  return mills::cli::run(argc, argv, std::cout, std::cerr);
}

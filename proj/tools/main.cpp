#include <iostream>

#include "dea/cli.hpp"

int main(int argc, char** argv) {
  return dea::cli::run(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "robustflow/cli.hpp"

int main(int argc, char** argv) {
  return robustflow::cli::run(argc, argv, std::cout, std::cerr);
}

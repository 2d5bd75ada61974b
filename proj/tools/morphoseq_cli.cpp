#include <iostream>

#include "morphoseq/cli.hpp"

int main(int argc, char** argv) {
  return morphoseq::cli::run(argc, argv, std::cout, std::cerr);
}

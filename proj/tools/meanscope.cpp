#include <iostream>

#include "meanscope/harness.hpp"

int main(int argc, char** argv) {
  return meanscope::run_cli(argc, argv, meanscope::builtin_registry(), std::cout, std::cerr);
}

#include <iostream>

#include "sharedword/cli.h"

int main(int argc, char** argv) {
  return sharedword::run_cli(argc, argv, std::cout, std::cerr);
}

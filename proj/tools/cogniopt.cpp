#include <exception>
#include <iostream>

#include "cogniopt/cli/commands.h"

int main(int argc, char** argv) {
  try {
    return cogniopt::cli::run_cli(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

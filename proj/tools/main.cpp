#include <cstdlib>
#include <iostream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
  return mvt::cli::run(args, std::cout, std::cerr, color);
}

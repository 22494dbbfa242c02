#include <iostream>

#include "hauteur/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hauteur::cli::run(args, std::cout, std::cerr);
}

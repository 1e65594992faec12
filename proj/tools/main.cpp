#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return moft::cli::run({argv, argv + argc}, std::cout, std::cerr);
}

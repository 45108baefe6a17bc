#include <iostream>

#include "mvtest/cli.hpp"

int main(int argc, char** argv) {
  return mvtest::main_entry(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  return keymaze::cli_main(argc, argv, std::cout, std::cerr);
}

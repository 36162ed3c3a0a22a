#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  return goal::cli::run(std::vector<std::string>(argv, argv + argc), std::cout,
                        std::cerr);
}

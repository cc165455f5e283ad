#include <iostream>

#include "bioamb/cli.hpp"

int main(int argc, char** argv) { return bioamb::cli::run(argc, argv, std::cin, std::cout, std::cerr); }

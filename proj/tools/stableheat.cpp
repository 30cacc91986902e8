#include <iostream>

#include "stableheat/cli.hpp"

int main(int argc, char** argv) { return stableheat::cli::run(argc, argv, std::cout, std::cerr); }

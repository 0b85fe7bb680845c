#include <iostream>

#include "bridgesim/cli/cli.hpp"

int main(int argc, char** argv) { return bridgesim::cli::main(argc, argv, std::cout, std::cerr); }

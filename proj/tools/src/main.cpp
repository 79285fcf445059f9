#include <iostream>

#include "lse_cli/cli.hpp"

int main(int argc, char** argv) { return lse::cli::main(argc, argv, std::cout, std::cerr); }

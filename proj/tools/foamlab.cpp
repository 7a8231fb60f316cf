#include <iostream>

#include "foamlab/cli.hpp"

int main(int argc, char** argv) { return foamlab::cli::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "ffdist/cli.hpp"

int main(int argc, char** argv) { return ffdist::cli::run(argc, argv, std::cout, std::cerr); }

#include "pvmk/cli/run.hpp"

#include <iostream>

int main(int argc, char** argv) { return pvmk::cli::run(argc, argv, std::cout, std::cerr); }

#include "nexp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nexp::cli::run(argc, argv, std::cout, std::cerr); }

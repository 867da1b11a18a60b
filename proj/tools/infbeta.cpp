#include <iostream>

#include "infbeta/cli.hpp"

int main(int argc, char** argv) { return infbeta::cli::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "ffkg/cli.hpp"

int main(int argc, char** argv) { return ffkg::cli::run(argc, argv, std::cout, std::cerr); }

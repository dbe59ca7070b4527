#include <iostream>

#include "hidmap/cli.hpp"

int main(int argc, char** argv) { return hidmap::cli::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "popcorn/cli.hpp"

int main(int argc, char** argv) { return popcorn::cli::run(argc, argv, std::cout, std::cerr); }

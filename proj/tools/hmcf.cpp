#include "hmcf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hmcf::cli::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "stripgap/cli_io.hpp"

int main(int argc, char** argv) { return stripgap::cli::cli_main(argc, argv, std::cout, std::cerr); }

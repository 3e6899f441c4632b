#include <iostream>

#include "geophase/cli.hpp"

int main(int argc, char** argv) { return geophase::cli_main(argc, argv, std::cout, std::cerr); }

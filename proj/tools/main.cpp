#include "shrinkreg/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return shrinkreg::run_cli(argc, argv, std::cout, std::cerr); }

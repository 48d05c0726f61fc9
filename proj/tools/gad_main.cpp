#include <iostream>

#include "gad/cli.hpp"

int main(int argc, char** argv) { return gad::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "sgl/cli.hpp"

int main(int argc, char** argv) { return sgl::run_cli(argc, argv, std::cout, std::cerr); }

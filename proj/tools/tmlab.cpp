#include <iostream>

#include "tmlab/cli.hpp"

int main(int argc, char** argv) { return tmlab::main_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "tfsrc/cli.hpp"

int main(int argc, char** argv) { return tfsrc::run_cli(argc, argv, std::cout, std::cerr); }

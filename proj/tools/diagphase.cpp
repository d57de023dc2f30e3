#include <iostream>

#include "diagphase/cli.hpp"

int main(int argc, char** argv) { return diagphase::run_cli(argc, argv, std::cout, std::cerr); }

#include "qsurf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qsurf::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "bridgelab/cli.hpp"

int main(int argc, char** argv) { return bridgelab::run_cli(argc, argv, std::cout, std::cerr); }

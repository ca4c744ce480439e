#include <iostream>

#include "nflab/cli.hpp"

int main(int argc, char** argv) { return nflab::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "cnlse/cli.hpp"

int main(int argc, char** argv) { return cnlse::run_cli(argc, argv, std::cout, std::cerr); }

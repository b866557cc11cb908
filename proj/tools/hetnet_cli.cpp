#include <iostream>

#include "hetnet/harness/cli.hpp"

int main(int argc, char** argv) { return hetnet::harness::run_cli(argc, argv, std::cout, std::cerr); }

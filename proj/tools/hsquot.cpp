#include <iostream>

#include "hsq/cli.hpp"

int main(int argc, char** argv) { return hsq::run_cli(argc, argv, std::cout, std::cerr); }
